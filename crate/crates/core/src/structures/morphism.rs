use std::fmt;
use std::sync::Arc;

use super::structure::{render_tuple, tuple_index, Structure, Tuples};
use super::subset::{self, Mask};
use super::Elem;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MorphismKind {
    Homomorphism,
    Embedding,
}

/// Why a candidate map fails to be an embedding (or homomorphism).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    OutOfRange { elem: Elem, image: Elem },
    NotInjective { a: Elem, b: Elem },
    FunctionNotPreserved { fun: String, args: Vec<Elem> },
    RelationNotPreserved { rel: String, tuple: Vec<Elem> },
    RelationNotReflected { rel: String, tuple: Vec<Elem> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { elem, image } => {
                write!(f, "{elem} maps to {image}, outside the target")
            }
            Violation::NotInjective { a, b } => write!(f, "not injective: {a} and {b} collide"),
            Violation::FunctionNotPreserved { fun, args } => {
                write!(f, "function {fun} not preserved at {}", render_tuple(args))
            }
            Violation::RelationNotPreserved { rel, tuple } => {
                write!(f, "relation {rel} not preserved at {}", render_tuple(tuple))
            }
            Violation::RelationNotReflected { rel, tuple } => {
                write!(f, "relation {rel} not reflected at {}", render_tuple(tuple))
            }
        }
    }
}

/// Checks `map: source -> target` tuple by tuple. Returns the first violation
/// in a fixed order: range, injectivity, functions, relations.
pub fn check_map(
    source: &Structure,
    target: &Structure,
    map: &[Elem],
    kind: MorphismKind,
) -> Result<Option<Violation>> {
    source.same_vocab(target)?;
    if map.len() != source.size() {
        return Err(Error::InvalidMorphism(format!(
            "map has {} entries for a source of size {}",
            map.len(),
            source.size()
        )));
    }
    for (elem, &image) in map.iter().enumerate() {
        if image >= target.size() {
            return Ok(Some(Violation::OutOfRange { elem, image }));
        }
    }
    if kind == MorphismKind::Embedding {
        for a in 0..map.len() {
            for b in a + 1..map.len() {
                if map[a] == map[b] {
                    return Ok(Some(Violation::NotInjective { a, b }));
                }
            }
        }
    }
    let vocab = source.vocab();
    for (fi, f) in vocab.functions.iter().enumerate() {
        for args in Tuples::new(source.size(), f.arity) {
            let image: Vec<Elem> = args.iter().map(|&a| map[a]).collect();
            if map[source.apply(fi, &args)] != target.apply(fi, &image) {
                return Ok(Some(Violation::FunctionNotPreserved {
                    fun: f.name.clone(),
                    args,
                }));
            }
        }
    }
    for (ri, r) in vocab.relations.iter().enumerate() {
        for tuple in Tuples::new(source.size(), r.arity) {
            let image: Vec<Elem> = tuple.iter().map(|&a| map[a]).collect();
            let here = source.holds(ri, &tuple);
            let there = target.holds(ri, &image);
            if here && !there {
                return Ok(Some(Violation::RelationNotPreserved {
                    rel: r.name.clone(),
                    tuple,
                }));
            }
            if kind == MorphismKind::Embedding && there && !here {
                return Ok(Some(Violation::RelationNotReflected {
                    rel: r.name.clone(),
                    tuple,
                }));
            }
        }
    }
    Ok(None)
}

pub fn is_embedding(source: &Structure, target: &Structure, map: &[Elem]) -> Result<bool> {
    Ok(check_map(source, target, map, MorphismKind::Embedding)?.is_none())
}

pub fn is_homomorphism(source: &Structure, target: &Structure, map: &[Elem]) -> Result<bool> {
    Ok(check_map(source, target, map, MorphismKind::Homomorphism)?.is_none())
}

/// A structure-preserving map between two structures over one vocabulary.
#[derive(Clone, PartialEq, Eq)]
pub struct Morphism {
    pub source: Arc<Structure>,
    pub target: Arc<Structure>,
    pub map: Vec<Elem>,
    pub kind: MorphismKind,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.kind, render_map(&self.map))
    }
}

/// Renders a map as `[0->2,1->0]`.
pub fn render_map(map: &[Elem]) -> String {
    let items: Vec<String> = map
        .iter()
        .enumerate()
        .map(|(i, j)| format!("{i}->{j}"))
        .collect();
    format!("[{}]", items.join(","))
}

impl Morphism {
    /// Validates `map` against `kind`.
    pub fn new(
        source: Arc<Structure>,
        target: Arc<Structure>,
        map: Vec<Elem>,
        kind: MorphismKind,
    ) -> Result<Self> {
        if let Some(v) = check_map(&source, &target, &map, kind)? {
            return Err(Error::InvalidMorphism(v.to_string()));
        }
        Ok(Morphism {
            source,
            target,
            map,
            kind,
        })
    }

    pub(crate) fn unchecked(
        source: Arc<Structure>,
        target: Arc<Structure>,
        map: Vec<Elem>,
        kind: MorphismKind,
    ) -> Self {
        Morphism {
            source,
            target,
            map,
            kind,
        }
    }

    pub fn identity(s: &Arc<Structure>) -> Self {
        Morphism {
            source: s.clone(),
            target: s.clone(),
            map: s.universe().collect(),
            kind: MorphismKind::Embedding,
        }
    }

    pub fn image(&self) -> Mask {
        subset::mask_of(&self.map)
    }

    /// `self ∘ inner`: apply `inner` first.
    pub fn compose(&self, inner: &Morphism) -> Result<Morphism> {
        compose(self, inner)
    }
}

/// `f ∘ g`. The composite is an embedding iff both factors are.
pub fn compose(f: &Morphism, g: &Morphism) -> Result<Morphism> {
    if !(Arc::ptr_eq(&g.target, &f.source) || *g.target == *f.source) {
        return Err(Error::BoundaryMismatch(format!(
            "target {} of the inner map differs from source {} of the outer map",
            g.target, f.source
        )));
    }
    let kind = if f.kind == MorphismKind::Embedding && g.kind == MorphismKind::Embedding {
        MorphismKind::Embedding
    } else {
        MorphismKind::Homomorphism
    };
    Ok(Morphism {
        source: g.source.clone(),
        target: f.target.clone(),
        map: compose_maps(&f.map, &g.map),
        kind,
    })
}

/// `outer ∘ inner` on raw maps.
pub fn compose_maps(outer: &[Elem], inner: &[Elem]) -> Vec<Elem> {
    inner.iter().map(|&x| outer[x]).collect()
}

/// Least substructure containing `elems`, with its inclusion embedding.
pub fn generated_substructure(
    m: &Arc<Structure>,
    elems: &[Elem],
) -> Result<(Arc<Structure>, Morphism)> {
    if let Some(&e) = elems.iter().find(|&&e| e >= m.size()) {
        return Err(Error::InvalidStructure(format!(
            "element {e} outside universe of size {}",
            m.size()
        )));
    }
    let mask = m.generated_mask(subset::mask_of(elems));
    let sub = Arc::new(m.induced(mask)?);
    let inclusion = Morphism::unchecked(
        sub.clone(),
        m.clone(),
        subset::elements(mask),
        MorphismKind::Embedding,
    );
    Ok((sub, inclusion))
}

struct Constraint {
    kind: ConstraintKind,
    symbol: usize,
    args: Vec<Elem>,
    out: Elem,
}

#[derive(PartialEq)]
enum ConstraintKind {
    Holds,
    Fails,
    Function,
}

/// Backtracking search for maps `source -> target`, assigning source elements
/// in increasing order and target values in increasing order, so solutions
/// arrive lexicographically.
pub(crate) struct MapSearch<'a> {
    source: &'a Structure,
    target: &'a Structure,
    kind: MorphismKind,
    levels: Vec<Vec<Constraint>>,
    nullary_ok: bool,
}

impl<'a> MapSearch<'a> {
    pub fn new(source: &'a Structure, target: &'a Structure, kind: MorphismKind) -> Result<Self> {
        source.same_vocab(target)?;
        let n = source.size();
        let vocab = source.vocab();
        let mut levels: Vec<Vec<Constraint>> = (0..n).map(|_| Vec::new()).collect();
        let mut nullary_ok = true;
        for (ri, r) in vocab.relations.iter().enumerate() {
            if r.arity == 0 {
                let here = source.holds(ri, &[]);
                let there = target.holds(ri, &[]);
                if (here && !there) || (kind == MorphismKind::Embedding && there && !here) {
                    nullary_ok = false;
                }
                continue;
            }
            for t in Tuples::new(n, r.arity) {
                let holds = source.holds(ri, &t);
                if !holds && kind == MorphismKind::Homomorphism {
                    continue;
                }
                let level = *t.iter().max().expect("arity > 0");
                levels[level].push(Constraint {
                    kind: if holds {
                        ConstraintKind::Holds
                    } else {
                        ConstraintKind::Fails
                    },
                    symbol: ri,
                    out: 0,
                    args: t,
                });
            }
        }
        for (fi, f) in vocab.functions.iter().enumerate() {
            for t in Tuples::new(n, f.arity) {
                let out = source.apply(fi, &t);
                let level = t.iter().copied().max().unwrap_or(0).max(out);
                levels[level].push(Constraint {
                    kind: ConstraintKind::Function,
                    symbol: fi,
                    args: t,
                    out,
                });
            }
        }
        Ok(MapSearch {
            source,
            target,
            kind,
            levels,
            nullary_ok,
        })
    }

    /// Calls `visit` on every solution until it returns `false`.
    pub fn run(&self, visit: &mut impl FnMut(&[Elem]) -> bool) {
        if !self.nullary_ok {
            return;
        }
        let mut map = vec![0; self.source.size()];
        let mut used = vec![false; self.target.size()];
        self.go(0, &mut map, &mut used, visit);
    }

    fn consistent(&self, level: usize, map: &[Elem]) -> bool {
        let n = self.target.size();
        let mut buf = Vec::new();
        for c in &self.levels[level] {
            buf.clear();
            buf.extend(c.args.iter().map(|&a| map[a]));
            let ok = match c.kind {
                ConstraintKind::Holds => self.target.rel_table(c.symbol)[tuple_index(n, &buf)],
                ConstraintKind::Fails => !self.target.rel_table(c.symbol)[tuple_index(n, &buf)],
                ConstraintKind::Function => {
                    self.target.fun_table(c.symbol)[tuple_index(n, &buf)] == map[c.out]
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }

    fn go(
        &self,
        level: usize,
        map: &mut Vec<Elem>,
        used: &mut Vec<bool>,
        visit: &mut impl FnMut(&[Elem]) -> bool,
    ) -> bool {
        if level == map.len() {
            return visit(map);
        }
        let injective = self.kind == MorphismKind::Embedding;
        for b in 0..self.target.size() {
            if injective && used[b] {
                continue;
            }
            map[level] = b;
            if !self.consistent(level, map) {
                continue;
            }
            used[b] = true;
            let keep_going = self.go(level + 1, map, used, visit);
            used[b] = false;
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// All embeddings `source -> target` as raw maps, lexicographically.
pub fn embedding_maps(source: &Structure, target: &Structure) -> Result<Vec<Vec<Elem>>> {
    maps_of_kind(source, target, MorphismKind::Embedding)
}

pub fn homomorphism_maps(source: &Structure, target: &Structure) -> Result<Vec<Vec<Elem>>> {
    maps_of_kind(source, target, MorphismKind::Homomorphism)
}

fn maps_of_kind(
    source: &Structure,
    target: &Structure,
    kind: MorphismKind,
) -> Result<Vec<Vec<Elem>>> {
    let search = MapSearch::new(source, target, kind)?;
    let mut out = Vec::new();
    search.run(&mut |m| {
        out.push(m.to_vec());
        true
    });
    Ok(out)
}

/// Whether some embedding `source -> target` exists.
pub fn embeds(source: &Structure, target: &Structure) -> Result<bool> {
    let search = MapSearch::new(source, target, MorphismKind::Embedding)?;
    let mut found = false;
    search.run(&mut |_| {
        found = true;
        false
    });
    Ok(found)
}

/// The embeddings `m -> n` in lexicographic order of their maps.
pub fn enumerate_embeddings(m: &Arc<Structure>, n: &Arc<Structure>) -> Result<Vec<Morphism>> {
    Ok(embedding_maps(m, n)?
        .into_iter()
        .map(|map| Morphism::unchecked(m.clone(), n.clone(), map, MorphismKind::Embedding))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_is_embedding() {
        let p3 = fixtures::path(3);
        let id: Vec<Elem> = p3.universe().collect();
        assert!(is_embedding(&p3, &p3, &id).unwrap());
    }

    #[test]
    fn collapsing_map_reports_injectivity() {
        let k2 = fixtures::complete(2);
        let k3 = fixtures::complete(3);
        let v = check_map(&k2, &k3, &[1, 1], MorphismKind::Embedding).unwrap();
        assert_eq!(v, Some(Violation::NotInjective { a: 0, b: 1 }));
    }

    #[test]
    fn reflection_failure_is_witnessed() {
        let empty2 = fixtures::graph(2, &[]);
        let k2 = fixtures::complete(2);
        let v = check_map(&empty2, &k2, &[0, 1], MorphismKind::Embedding).unwrap();
        assert_eq!(
            v,
            Some(Violation::RelationNotReflected {
                rel: "E".into(),
                tuple: vec![0, 1]
            })
        );
        assert!(is_homomorphism(&empty2, &k2, &[0, 1]).unwrap());
    }

    #[test]
    fn vocabulary_mismatch_is_an_error() {
        let g = fixtures::complete(2);
        let s = fixtures::pure_set(2);
        assert!(matches!(
            check_map(&g, &s, &[0, 1], MorphismKind::Embedding),
            Err(Error::VocabularyMismatch { .. })
        ));
    }

    #[test]
    fn embedding_counts() {
        let one = Arc::new(fixtures::pure_set(1));
        let three = Arc::new(fixtures::pure_set(3));
        assert_eq!(enumerate_embeddings(&one, &three).unwrap().len(), 3);
        let k2 = Arc::new(fixtures::complete(2));
        let k3 = Arc::new(fixtures::complete(3));
        assert_eq!(enumerate_embeddings(&k2, &k3).unwrap().len(), 6);
    }

    #[test]
    fn constant_without_matching_image_gives_nothing() {
        // M: c names an element carrying P; N: no element carries P.
        let v = fixtures::constant_unary_vocab();
        let mut b = Structure::builder(&v, 1);
        b.set("c", &[], 0).unwrap();
        b.relate("P", &[0]).unwrap();
        let m = b.build().unwrap();
        let mut b = Structure::builder(&v, 2);
        b.set("c", &[], 1).unwrap();
        let n = b.build().unwrap();
        assert!(embedding_maps(&m, &n).unwrap().is_empty());
    }

    #[test]
    fn generated_substructure_examples() {
        let cyc = Arc::new(fixtures::successor_cycle(4));
        let (sub, inc) = generated_substructure(&cyc, &[0]).unwrap();
        assert_eq!(sub.size(), 4);
        assert_eq!(inc.map, vec![0, 1, 2, 3]);

        let g = Arc::new(fixtures::path(3));
        let (sub, _) = generated_substructure(&g, &[]).unwrap();
        assert!(sub.is_empty());

        let v = fixtures::constant_vocab(&["c"]);
        let mut b = Structure::builder(&v, 3);
        b.set("c", &[], 2).unwrap();
        let m = Arc::new(b.build().unwrap());
        let (_, inc) = generated_substructure(&m, &[0]).unwrap();
        assert_eq!(inc.map, vec![0, 2]);
    }

    #[test]
    fn compose_units_and_inclusions() {
        let k3 = Arc::new(fixtures::complete(3));
        let k2 = Arc::new(fixtures::complete(2));
        let f = Morphism::new(k2.clone(), k3.clone(), vec![2, 0], MorphismKind::Embedding).unwrap();
        assert_eq!(compose(&f, &Morphism::identity(&k2)).unwrap(), f);
        assert_eq!(compose(&Morphism::identity(&k3), &f).unwrap(), f);
        assert!(compose(&f, &f).is_err());

        let cyc = Arc::new(fixtures::path(4));
        let (a, ia) = generated_substructure(&cyc, &[1]).unwrap();
        let (b, ib) = generated_substructure(&cyc, &[1, 2]).unwrap();
        // a = {1} sits inside b = {1,2} at position 0.
        let a_in_b = Morphism::new(a.clone(), b.clone(), vec![0], MorphismKind::Embedding).unwrap();
        assert_eq!(compose(&ib, &a_in_b).unwrap().map, ia.map);
    }
}
