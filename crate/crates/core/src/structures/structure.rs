use std::fmt;
use std::sync::Arc;

use super::subset::{self, Mask, MAX_UNIVERSE};
use super::vocab::Vocabulary;
use super::Elem;
use crate::error::{Error, Result};

/// Number of `arity`-tuples over a universe of size `n`.
pub fn tuple_count(n: usize, arity: usize) -> usize {
    n.pow(arity as u32)
}

/// Position of `tuple` in the lexicographic enumeration of all tuples of its
/// length over `0..n`.
pub fn tuple_index(n: usize, tuple: &[Elem]) -> usize {
    tuple.iter().fold(0, |acc, &e| acc * n + e)
}

pub fn tuple_at(n: usize, arity: usize, mut index: usize) -> Vec<Elem> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = index % n;
        index /= n;
    }
    t
}

/// Lexicographic iterator over all `arity`-tuples of `0..n`.
pub struct Tuples {
    n: usize,
    current: Option<Vec<Elem>>,
}

impl Tuples {
    pub fn new(n: usize, arity: usize) -> Self {
        let current = if arity > 0 && n == 0 {
            None
        } else {
            Some(vec![0; arity])
        };
        Tuples { n, current }
    }
}

impl Iterator for Tuples {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        let out = self.current.clone()?;
        let mut next = out.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            next[i] += 1;
            if next[i] < self.n {
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// A finite structure with universe `0..size`.
///
/// Relations are stored as dense truth tables and functions as dense value
/// tables, both indexed by [`tuple_index`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    size: usize,
    rels: Vec<Vec<bool>>,
    funs: Vec<Vec<Elem>>,
}

impl Structure {
    pub fn builder(vocab: &Arc<Vocabulary>, size: usize) -> StructureBuilder {
        StructureBuilder::new(vocab, size)
    }

    /// The empty structure; fails if the vocabulary has constants.
    pub fn empty(vocab: &Arc<Vocabulary>) -> Result<Self> {
        StructureBuilder::new(vocab, 0).build()
    }

    pub(crate) fn from_tables(
        vocab: Arc<Vocabulary>,
        size: usize,
        rels: Vec<Vec<bool>>,
        funs: Vec<Vec<Elem>>,
    ) -> Self {
        Structure {
            vocab,
            size,
            rels,
            funs,
        }
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn universe(&self) -> std::ops::Range<Elem> {
        0..self.size
    }

    pub fn holds(&self, rel: usize, tuple: &[Elem]) -> bool {
        self.rels[rel][tuple_index(self.size, tuple)]
    }

    pub(crate) fn rel_table(&self, rel: usize) -> &[bool] {
        &self.rels[rel]
    }

    pub(crate) fn fun_table(&self, fun: usize) -> &[Elem] {
        &self.funs[fun]
    }

    pub fn apply(&self, fun: usize, args: &[Elem]) -> Elem {
        self.funs[fun][tuple_index(self.size, args)]
    }

    /// Tuples in the interpretation of relation `rel`, lexicographically.
    pub fn rel_tuples(&self, rel: usize) -> Vec<Vec<Elem>> {
        let arity = self.vocab.relations[rel].arity;
        self.rels[rel]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| tuple_at(self.size, arity, i))
            .collect()
    }

    pub fn same_vocab(&self, other: &Structure) -> Result<()> {
        if Arc::ptr_eq(&self.vocab, &other.vocab) || *self.vocab == *other.vocab {
            Ok(())
        } else {
            Err(Error::VocabularyMismatch {
                expected: self.vocab.name.clone(),
                found: other.vocab.name.clone(),
            })
        }
    }

    /// Closure of `mask` under all function interpretations.
    pub fn generated_mask(&self, mask: Mask) -> Mask {
        let mut cur = mask;
        loop {
            let mut next = cur;
            let elems = subset::elements(cur);
            for (fi, f) in self.vocab.functions.iter().enumerate() {
                if f.arity == 0 {
                    next |= 1u64 << self.funs[fi][0];
                    continue;
                }
                for t in TuplesOver::new(&elems, f.arity) {
                    next |= 1u64 << self.apply(fi, &t);
                }
            }
            if next == cur {
                return cur;
            }
            cur = next;
        }
    }

    pub fn is_closed(&self, mask: Mask) -> bool {
        self.generated_mask(mask) == mask
    }

    /// Induced substructure on the sorted elements of `mask`; element `i` of
    /// the result corresponds to the `i`-th smallest element of `mask`.
    /// Fails when `mask` is not closed under the functions.
    pub fn induced(&self, mask: Mask) -> Result<Structure> {
        let elems = subset::elements(mask);
        if !self.is_closed(mask) {
            return Err(Error::InvalidStructure(format!(
                "subset {} is not closed under the functions",
                subset::render(mask)
            )));
        }
        let m = elems.len();
        let mut position = vec![usize::MAX; self.size];
        for (i, &e) in elems.iter().enumerate() {
            position[e] = i;
        }
        let rels = self
            .vocab
            .relations
            .iter()
            .enumerate()
            .map(|(ri, r)| {
                Tuples::new(m, r.arity)
                    .map(|t| {
                        let orig: Vec<Elem> = t.iter().map(|&i| elems[i]).collect();
                        self.holds(ri, &orig)
                    })
                    .collect()
            })
            .collect();
        let funs = self
            .vocab
            .functions
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                Tuples::new(m, f.arity)
                    .map(|t| {
                        let orig: Vec<Elem> = t.iter().map(|&i| elems[i]).collect();
                        position[self.apply(fi, &orig)]
                    })
                    .collect()
            })
            .collect();
        Ok(Structure {
            vocab: self.vocab.clone(),
            size: m,
            rels,
            funs,
        })
    }

    /// Applies a bijection `perm` (old id to new id) to the universe.
    pub fn relabel(&self, perm: &[Elem]) -> Structure {
        let n = self.size;
        let mut inverse = vec![0; n];
        for (old, &new) in perm.iter().enumerate() {
            inverse[new] = old;
        }
        let rels = self
            .vocab
            .relations
            .iter()
            .enumerate()
            .map(|(ri, r)| {
                Tuples::new(n, r.arity)
                    .map(|t| {
                        let old: Vec<Elem> = t.iter().map(|&e| inverse[e]).collect();
                        self.holds(ri, &old)
                    })
                    .collect()
            })
            .collect();
        let funs = self
            .vocab
            .functions
            .iter()
            .enumerate()
            .map(|(fi, f)| {
                Tuples::new(n, f.arity)
                    .map(|t| {
                        let old: Vec<Elem> = t.iter().map(|&e| inverse[e]).collect();
                        perm[self.apply(fi, &old)]
                    })
                    .collect()
            })
            .collect();
        Structure {
            vocab: self.vocab.clone(),
            size: n,
            rels,
            funs,
        }
    }

    /// Restriction of the interpretation to the symbols of `sub`.
    pub fn reduct(&self, sub: &Arc<Vocabulary>) -> Result<Structure> {
        sub.check_sub_vocabulary(&self.vocab)?;
        let rels = sub
            .relations
            .iter()
            .map(|r| {
                let i = self.vocab.relation_index(&r.name).expect("checked");
                let orig = &self.vocab.relations[i];
                if (r.symmetric && !orig.symmetric) || (r.irreflexive && !orig.irreflexive) {
                    return Err(Error::SymbolMismatch(format!(
                        "relation `{}` carries constraints absent from `{}`",
                        r.name, self.vocab.name
                    )));
                }
                Ok(self.rels[i].clone())
            })
            .collect::<Result<Vec<_>>>()?;
        let funs = sub
            .functions
            .iter()
            .map(|f| self.funs[self.vocab.function_index(&f.name).expect("checked")].clone())
            .collect();
        Ok(Structure {
            vocab: sub.clone(),
            size: self.size,
            rels,
            funs,
        })
    }

    /// Same underlying tables over a vocabulary with an identical signature.
    pub fn with_vocab(&self, vocab: &Arc<Vocabulary>) -> Result<Structure> {
        if !self.vocab.same_signature(vocab) {
            return Err(Error::VocabularyMismatch {
                expected: vocab.name.clone(),
                found: self.vocab.name.clone(),
            });
        }
        let mut s = self.clone();
        s.vocab = vocab.clone();
        Ok(s)
    }

    /// Compact one-line rendering used in reports and witnesses, e.g.
    /// `[n=3 | E:(0,1)(1,0) | c:()->2]`.
    pub fn compact(&self) -> String {
        let mut parts = vec![format!("n={}", self.size)];
        for (ri, r) in self.vocab.relations.iter().enumerate() {
            let tuples: String = self
                .rel_tuples(ri)
                .iter()
                .map(|t| render_tuple(t))
                .collect();
            parts.push(format!("{}:{}", r.name, tuples));
        }
        for (fi, f) in self.vocab.functions.iter().enumerate() {
            let entries: Vec<String> = Tuples::new(self.size, f.arity)
                .map(|t| format!("{}->{}", render_tuple(&t), self.apply(fi, &t)))
                .collect();
            parts.push(format!("{}:{}", f.name, entries.join("")));
        }
        format!("[{}]", parts.join(" | "))
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.vocab.name, self.compact())
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.compact())
    }
}

pub fn render_tuple(t: &[Elem]) -> String {
    let items: Vec<String> = t.iter().map(|e| e.to_string()).collect();
    format!("({})", items.join(","))
}

/// Lexicographic iterator over tuples drawn from a given element list.
pub struct TuplesOver<'a> {
    elems: &'a [Elem],
    inner: Tuples,
}

impl<'a> TuplesOver<'a> {
    pub fn new(elems: &'a [Elem], arity: usize) -> Self {
        TuplesOver {
            elems,
            inner: Tuples::new(elems.len(), arity),
        }
    }
}

impl Iterator for TuplesOver<'_> {
    type Item = Vec<Elem>;

    fn next(&mut self) -> Option<Vec<Elem>> {
        self.inner
            .next()
            .map(|t| t.iter().map(|&i| self.elems[i]).collect())
    }
}

/// Incremental construction with validation at [`StructureBuilder::build`].
#[derive(Debug, Clone)]
pub struct StructureBuilder {
    vocab: Arc<Vocabulary>,
    size: usize,
    rels: Vec<Vec<bool>>,
    funs: Vec<Vec<Option<Elem>>>,
}

impl StructureBuilder {
    pub fn new(vocab: &Arc<Vocabulary>, size: usize) -> Self {
        StructureBuilder {
            vocab: vocab.clone(),
            size,
            rels: vocab
                .relations
                .iter()
                .map(|r| vec![false; tuple_count(size, r.arity)])
                .collect(),
            funs: vocab
                .functions
                .iter()
                .map(|f| vec![None; tuple_count(size, f.arity)])
                .collect(),
        }
    }

    fn check_tuple(&self, sym: &str, arity: usize, tuple: &[Elem]) -> Result<()> {
        if tuple.len() != arity {
            return Err(Error::InvalidStructure(format!(
                "`{sym}` expects {arity} arguments, got {}",
                tuple.len()
            )));
        }
        if let Some(&e) = tuple.iter().find(|&&e| e >= self.size) {
            return Err(Error::InvalidStructure(format!(
                "element {e} of `{sym}` tuple {} outside universe of size {}",
                render_tuple(tuple),
                self.size
            )));
        }
        Ok(())
    }

    pub fn relate(&mut self, rel: &str, tuple: &[Elem]) -> Result<&mut Self> {
        let ri = self
            .vocab
            .relation_index(rel)
            .ok_or_else(|| Error::SymbolMismatch(format!("unknown relation `{rel}`")))?;
        self.check_tuple(rel, self.vocab.relations[ri].arity, tuple)?;
        self.rels[ri][tuple_index(self.size, tuple)] = true;
        Ok(self)
    }

    /// Adds `(a,b)` and `(b,a)`.
    pub fn relate_sym(&mut self, rel: &str, a: Elem, b: Elem) -> Result<&mut Self> {
        self.relate(rel, &[a, b])?;
        self.relate(rel, &[b, a])
    }

    pub fn set(&mut self, fun: &str, args: &[Elem], value: Elem) -> Result<&mut Self> {
        let fi = self
            .vocab
            .function_index(fun)
            .ok_or_else(|| Error::SymbolMismatch(format!("unknown function `{fun}`")))?;
        self.check_tuple(fun, self.vocab.functions[fi].arity, args)?;
        if value >= self.size {
            return Err(Error::InvalidStructure(format!(
                "value {value} of `{fun}` outside universe of size {}",
                self.size
            )));
        }
        self.funs[fi][tuple_index(self.size, args)] = Some(value);
        Ok(self)
    }

    /// Fills a function table from a closure over argument tuples.
    pub fn set_all(&mut self, fun: &str, f: impl Fn(&[Elem]) -> Elem) -> Result<&mut Self> {
        let arity = self
            .vocab
            .functions
            .iter()
            .find(|s| s.name == fun)
            .ok_or_else(|| Error::SymbolMismatch(format!("unknown function `{fun}`")))?
            .arity;
        for t in Tuples::new(self.size, arity) {
            let v = f(&t);
            self.set(fun, &t, v)?;
        }
        Ok(self)
    }

    pub fn build(&self) -> Result<Structure> {
        if self.size > MAX_UNIVERSE {
            return Err(Error::ResourceLimit(format!(
                "universe of size {} exceeds {MAX_UNIVERSE}",
                self.size
            )));
        }
        let mut funs = Vec::with_capacity(self.funs.len());
        for (fi, table) in self.funs.iter().enumerate() {
            let f = &self.vocab.functions[fi];
            let mut out = Vec::with_capacity(table.len());
            for (i, v) in table.iter().enumerate() {
                match v {
                    Some(v) => out.push(*v),
                    None => {
                        return Err(Error::InvalidStructure(format!(
                            "function `{}` is not total: missing value at {}",
                            f.name,
                            render_tuple(&tuple_at(self.size, f.arity, i))
                        )))
                    }
                }
            }
            if f.arity == 0 && self.size == 0 {
                return Err(Error::InvalidStructure(format!(
                    "constant `{}` needs a nonempty universe",
                    f.name
                )));
            }
            funs.push(out);
        }
        for (ri, r) in self.vocab.relations.iter().enumerate() {
            for a in 0..self.size {
                if r.irreflexive && self.rels[ri][tuple_index(self.size, &[a, a])] {
                    return Err(Error::InvalidStructure(format!(
                        "irreflexive relation `{}` holds at ({a},{a})",
                        r.name
                    )));
                }
                if r.symmetric {
                    for b in 0..self.size {
                        let ab = self.rels[ri][tuple_index(self.size, &[a, b])];
                        let ba = self.rels[ri][tuple_index(self.size, &[b, a])];
                        if ab && !ba {
                            return Err(Error::InvalidStructure(format!(
                                "symmetric relation `{}` holds at ({a},{b}) but not at ({b},{a})",
                                r.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(Structure {
            vocab: self.vocab.clone(),
            size: self.size,
            rels: self.rels.clone(),
            funs,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::vocab::{FunctionSymbol, RelationSymbol};

    fn graph_vocab() -> Arc<Vocabulary> {
        Arc::new(Vocabulary::new("graph", vec![RelationSymbol::graph_edge("E")], vec![]).unwrap())
    }

    #[test]
    fn tuple_enumeration_is_lexicographic() {
        let all: Vec<Vec<Elem>> = Tuples::new(2, 2).collect();
        assert_eq!(all, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(Tuples::new(0, 0).count(), 1);
        assert_eq!(Tuples::new(0, 2).count(), 0);
        for (i, t) in Tuples::new(3, 3).enumerate() {
            assert_eq!(tuple_index(3, &t), i);
            assert_eq!(tuple_at(3, 3, i), t);
        }
    }

    #[test]
    fn missing_function_value_names_the_tuple() {
        let v = Arc::new(Vocabulary::new("s", vec![], vec![FunctionSymbol::new("s", 1)]).unwrap());
        let mut b = Structure::builder(&v, 2);
        b.set("s", &[0], 1).unwrap();
        let err = b.build().unwrap_err();
        assert!(err.to_string().contains("(1)"), "{err}");
    }

    #[test]
    fn graph_constraints_enforced() {
        let v = graph_vocab();
        let mut b = Structure::builder(&v, 2);
        b.relate("E", &[0, 1]).unwrap();
        assert!(b.build().is_err());
        b.relate("E", &[1, 0]).unwrap();
        assert!(b.build().is_ok());
        let mut loopy = Structure::builder(&v, 1);
        loopy.relate("E", &[0, 0]).unwrap();
        assert!(loopy.build().is_err());
    }

    #[test]
    fn generated_closure_cycle_and_constants() {
        let v = Arc::new(Vocabulary::new("s", vec![], vec![FunctionSymbol::new("s", 1)]).unwrap());
        let mut b = Structure::builder(&v, 4);
        b.set_all("s", |t| (t[0] + 1) % 4).unwrap();
        let m = b.build().unwrap();
        assert_eq!(m.generated_mask(0b0001), 0b1111);

        let vc = Arc::new(Vocabulary::new("c", vec![], vec![FunctionSymbol::new("c", 0)]).unwrap());
        let mut b = Structure::builder(&vc, 3);
        b.set("c", &[], 2).unwrap();
        let m = b.build().unwrap();
        assert_eq!(subset::elements(m.generated_mask(0b001)), vec![0, 2]);
    }
}
