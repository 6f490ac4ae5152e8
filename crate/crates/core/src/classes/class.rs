use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::structures::{
    canonical_form, canonicalize, embedding_maps, embeds, enumerate_structures, is_embedding,
    render_map, subset, Code, Elem, Mask, Morphism, MorphismKind, Structure, Vocabulary,
};
use crate::tarski::DiagramType;

/// Default bound for the bounded quantifiers of class checks.
pub const DEFAULT_SCALE: usize = 4;

#[derive(Debug, Clone)]
pub enum Presentation {
    /// Members up to isomorphism, as canonical representatives.
    Explicit(Vec<Arc<Structure>>),
    /// All structures into which no listed shape embeds.
    Forbid(Vec<DiagramType>),
}

/// A listed strong inclusion `map: sub -> sup`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderPair {
    pub sub: Arc<Structure>,
    pub sup: Arc<Structure>,
    pub map: Vec<Elem>,
}

impl fmt::Display for OrderPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}, {})",
            self.sub.compact(),
            self.sup.compact(),
            render_map(&self.map)
        )
    }
}

#[derive(Debug, Clone)]
pub enum Order {
    Substructure,
    /// The least order containing the listed inclusions that is closed under
    /// isomorphism, identities and composition.
    Pairs(Vec<OrderPair>),
}

/// An abstract class `(K, ≤K)` examined up to a size bound.
#[derive(Clone)]
pub struct StructureClass {
    name: String,
    vocab: Arc<Vocabulary>,
    presentation: Presentation,
    order: Order,
    scale: usize,
    listed: HashMap<Code, usize>,
    names: BTreeMap<Code, String>,
    cache: OnceLock<Arc<Cache>>,
}

struct Cache {
    members: Vec<Arc<Structure>>,
    by_code: HashMap<Code, usize>,
    by_value: HashMap<Structure, usize>,
    strong: Vec<Vec<Mask>>,
}

/// Result of the closure operator: the intersection of all strong
/// substructures containing a set, and whether that intersection is itself
/// strong.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub mask: Mask,
    pub strong: bool,
    /// Number of strong substructures that were intersected.
    pub family: usize,
}

impl fmt::Debug for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StructureClass({})", self.name)
    }
}

impl StructureClass {
    pub fn explicit(
        name: impl Into<String>,
        vocab: &Arc<Vocabulary>,
        members: &[Structure],
        order: Order,
        scale: usize,
    ) -> Result<Self> {
        let mut reps: BTreeMap<Code, Arc<Structure>> = BTreeMap::new();
        for m in members {
            check_vocab(vocab, m)?;
            let (rep, form) = canonicalize(m);
            reps.entry(form.code).or_insert_with(|| Arc::new(rep));
        }
        let listed = reps.keys().cloned().enumerate().map(|(i, c)| (c, i)).collect();
        let class = StructureClass {
            name: name.into(),
            vocab: vocab.clone(),
            presentation: Presentation::Explicit(reps.into_values().collect()),
            order,
            scale,
            listed,
            names: BTreeMap::new(),
            cache: OnceLock::new(),
        };
        class.validate_order()?;
        Ok(class)
    }

    /// Class of all structures omitting every shape in `forbidden`, ordered
    /// by substructure.
    pub fn forbid(
        name: impl Into<String>,
        vocab: &Arc<Vocabulary>,
        forbidden: &[DiagramType],
        scale: usize,
    ) -> Result<Self> {
        for d in forbidden {
            check_vocab(vocab, d.shape())?;
        }
        let mut gamma: Vec<DiagramType> = forbidden.to_vec();
        gamma.sort();
        gamma.dedup();
        Ok(StructureClass {
            name: name.into(),
            vocab: vocab.clone(),
            presentation: Presentation::Forbid(gamma),
            order: Order::Substructure,
            scale,
            listed: HashMap::new(),
            names: BTreeMap::new(),
            cache: OnceLock::new(),
        })
    }

    /// Every structure over `vocab`.
    pub fn all(name: impl Into<String>, vocab: &Arc<Vocabulary>, scale: usize) -> Self {
        StructureClass::forbid(name, vocab, &[], scale).expect("no shapes to check")
    }

    pub fn with_scale(&self, scale: usize) -> StructureClass {
        let mut c = self.clone();
        c.scale = scale;
        c.cache = OnceLock::new();
        c
    }

    pub fn with_name(mut self, name: impl Into<String>) -> StructureClass {
        self.name = name.into();
        self
    }

    /// Records a display name for the isomorphism class of `m`.
    pub fn name_member(&mut self, m: &Structure, name: impl Into<String>) {
        self.names
            .entry(canonical_form(m).code)
            .or_insert_with(|| name.into());
    }

    /// Display name of `m`'s isomorphism class, falling back to its compact
    /// rendering.
    pub fn describe(&self, m: &Structure) -> String {
        match self.names.get(&canonical_form(m).code) {
            Some(n) => n.clone(),
            None => m.compact(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vocab(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn order(&self) -> &Order {
        &self.order
    }

    pub fn scale(&self) -> usize {
        self.scale
    }

    pub fn is_forbid(&self) -> bool {
        matches!(self.presentation, Presentation::Forbid(_))
    }

    pub fn member(&self, m: &Structure) -> Result<bool> {
        check_vocab(&self.vocab, m)?;
        Ok(self.member_unchecked(m))
    }

    fn member_unchecked(&self, m: &Structure) -> bool {
        match &self.presentation {
            Presentation::Explicit(_) => self.listed.contains_key(&canonical_form(m).code),
            Presentation::Forbid(gamma) => !gamma
                .iter()
                .any(|d| embeds(d.shape(), m).expect("shared vocabulary")),
        }
    }

    /// Canonical representatives of the members of size at most the scale,
    /// in canonical-code order.
    pub fn members(&self) -> &[Arc<Structure>] {
        &self.cache().members
    }

    fn cache(&self) -> &Cache {
        self.cache.get_or_init(|| Arc::new(self.build_cache()))
    }

    fn build_cache(&self) -> Cache {
        let members: Vec<Arc<Structure>> = match &self.presentation {
            Presentation::Explicit(list) => list
                .iter()
                .filter(|m| m.size() <= self.scale)
                .cloned()
                .collect(),
            Presentation::Forbid(_) => enumerate_structures(&self.vocab, self.scale)
                .expect("enumeration within the configured ceiling")
                .into_iter()
                .filter(|m| self.member_unchecked(m))
                .map(Arc::new)
                .collect(),
        };
        let by_code: HashMap<Code, usize> = members
            .iter()
            .enumerate()
            .map(|(i, m)| (canonical_form(m).code, i))
            .collect();
        let by_value = members
            .iter()
            .enumerate()
            .map(|(i, m)| ((**m).clone(), i))
            .collect();
        let strong = match &self.order {
            Order::Substructure => members
                .iter()
                .map(|m| self.substructure_masks(m))
                .collect(),
            Order::Pairs(pairs) => pair_closure(&members, &by_code, pairs),
        };
        Cache {
            members,
            by_code,
            by_value,
            strong,
        }
    }

    fn substructure_masks(&self, n: &Structure) -> Vec<Mask> {
        subset::subsets(n.size())
            .into_iter()
            .filter(|&x| {
                n.is_closed(x) && self.member_unchecked(&n.induced(x).expect("closed"))
            })
            .collect()
    }

    fn validate_order(&self) -> Result<()> {
        let Order::Pairs(pairs) = &self.order else {
            return Ok(());
        };
        for p in pairs {
            check_vocab(&self.vocab, &p.sub)?;
            check_vocab(&self.vocab, &p.sup)?;
            for s in [&p.sub, &p.sup] {
                if !self.member_unchecked(s) {
                    return Err(Error::InvalidClass(format!(
                        "order pair {p} mentions the non-member {}",
                        s.compact()
                    )));
                }
            }
            if p.map.len() != p.sub.size() || !is_embedding(&p.sub, &p.sup, &p.map)? {
                return Err(Error::InvalidClass(format!(
                    "order pair {p} is not an embedding"
                )));
            }
        }
        Ok(())
    }

    /// Index of the member isomorphic to `n` together with a map from the
    /// member's elements to `n`'s, or `None` if `n` is not a member at scale.
    fn locate(&self, n: &Structure) -> Option<(usize, Option<Vec<Elem>>)> {
        let cache = self.cache();
        if let Some(&i) = cache.by_value.get(n) {
            return Some((i, None));
        }
        let form = canonical_form(n);
        let &i = cache.by_code.get(&form.code)?;
        // The stored member may differ from the canonical representative by
        // an automorphism, which leaves the strong family unchanged.
        let rep = form.representative(n);
        let to_member = if *cache.members[i] == rep {
            form.relabel.clone()
        } else {
            let iso = embedding_maps(&rep, &cache.members[i])
                .expect("shared vocabulary")
                .into_iter()
                .next()
                .expect("equal codes");
            form.relabel.iter().map(|&x| iso[x]).collect()
        };
        let mut back = vec![0; n.size()];
        for (x, &j) in to_member.iter().enumerate() {
            back[j] = x;
        }
        Some((i, Some(back)))
    }

    /// Element sets of the strong substructures of the member `n`, in
    /// size-then-lex order.
    pub fn strong_masks(&self, n: &Structure) -> Result<Vec<Mask>> {
        check_vocab(&self.vocab, n)?;
        match self.locate(n) {
            Some((i, None)) => Ok(self.cache().strong[i].clone()),
            Some((i, Some(back))) => {
                let mut out: Vec<Mask> = self.cache().strong[i]
                    .iter()
                    .map(|&x| subset::image(x, &back))
                    .collect();
                subset::sort(&mut out);
                Ok(out)
            }
            None => {
                if matches!(self.order, Order::Substructure) && self.member_unchecked(n) {
                    Ok(self.substructure_masks(n))
                } else {
                    Err(Error::precondition(
                        format!("not a member of `{}` at scale {}", self.name, self.scale),
                        Some(n.compact()),
                    ))
                }
            }
        }
    }

    pub fn is_strong(&self, n: &Structure, mask: Mask) -> Result<bool> {
        Ok(self.strong_masks(n)?.contains(&mask))
    }

    /// The strong substructures of `n` with their inclusions.
    pub fn strong_subs(&self, n: &Arc<Structure>) -> Result<Vec<(Arc<Structure>, Morphism)>> {
        self.strong_masks(n)?
            .into_iter()
            .map(|x| {
                let sub = Arc::new(n.induced(x)?);
                let inc = Morphism::new(
                    sub.clone(),
                    n.clone(),
                    subset::elements(x),
                    MorphismKind::Embedding,
                )?;
                Ok((sub, inc))
            })
            .collect()
    }

    /// Embeddings `m -> n` whose image is a strong substructure of `n`.
    pub fn k_embeddings(&self, m: &Structure, n: &Structure) -> Result<Vec<Vec<Elem>>> {
        let strong = self.strong_masks(n)?;
        Ok(embedding_maps(m, n)?
            .into_iter()
            .filter(|f| strong.contains(&subset::mask_of(f)))
            .collect())
    }

    pub fn is_k_embedding(&self, m: &Structure, n: &Structure, map: &[Elem]) -> Result<bool> {
        Ok(map.len() == m.size()
            && is_embedding(m, n, map)?
            && self.is_strong(n, subset::mask_of(map))?)
    }

    /// Intersection of the strong substructures of `n` containing `a`.
    pub fn cl(&self, n: &Structure, a: Mask) -> Result<Closure> {
        if !subset::is_subset(a, subset::full(n.size())) {
            return Err(Error::precondition(
                format!("{} is not a subset of the universe", subset::render(a)),
                None,
            ));
        }
        let strong = self.strong_masks(n)?;
        Ok(closure_in(&strong, a, n.size()))
    }

    /// Closure of `a` as a structure, with the strong flag.
    pub fn cl_k(&self, n: &Structure, a: Mask) -> Result<(Structure, Closure)> {
        let c = self.cl(n, a)?;
        Ok((n.induced(c.mask)?, c))
    }
}

pub(crate) fn closure_in(strong: &[Mask], a: Mask, size: usize) -> Closure {
    let mut mask = subset::full(size);
    let mut family = 0;
    for &x in strong {
        if subset::is_subset(a, x) {
            mask &= x;
            family += 1;
        }
    }
    if family == 0 {
        // No strong substructure contains `a`: report the empty family.
        return Closure {
            mask: a,
            strong: false,
            family: 0,
        };
    }
    Closure {
        mask,
        strong: strong.contains(&mask),
        family,
    }
}

fn check_vocab(vocab: &Arc<Vocabulary>, m: &Structure) -> Result<()> {
    if Arc::ptr_eq(vocab, m.vocab()) || **vocab == **m.vocab() {
        Ok(())
    } else {
        Err(Error::VocabularyMismatch {
            expected: vocab.name.clone(),
            found: m.vocab().name.clone(),
        })
    }
}

/// Strong families generated by the listed pairs: every member is strong in
/// itself, listed inclusions are transported along isomorphisms, and the
/// families are closed under automorphisms and composition.
fn pair_closure(
    members: &[Arc<Structure>],
    by_code: &HashMap<Code, usize>,
    pairs: &[OrderPair],
) -> Vec<Vec<Mask>> {
    let autos: Vec<Vec<Vec<Elem>>> = members
        .iter()
        .map(|m| embedding_maps(m, m).expect("shared vocabulary"))
        .collect();
    let mut strong: Vec<BTreeSet<Mask>> = members
        .iter()
        .map(|m| BTreeSet::from([subset::full(m.size())]))
        .collect();
    let to_member = |s: &Structure| -> Option<(usize, Vec<Elem>)> {
        let form = canonical_form(s);
        let &i = by_code.get(&form.code)?;
        let rep = form.representative(s);
        let iso = embedding_maps(&rep, &members[i])
            .expect("shared vocabulary")
            .into_iter()
            .next()
            .expect("equal codes");
        Some((i, form.relabel.iter().map(|&x| iso[x]).collect()))
    };
    for p in pairs {
        if let Some((j, into)) = to_member(&p.sup) {
            let image: Vec<Elem> = p.map.iter().map(|&a| into[a]).collect();
            strong[j].insert(subset::mask_of(&image));
        }
    }
    loop {
        let mut changed = false;
        for i in 0..members.len() {
            let current: Vec<Mask> = strong[i].iter().copied().collect();
            let mut add = Vec::new();
            for &x in &current {
                for auto in &autos[i] {
                    add.push(subset::image(x, auto));
                }
                let sub = members[i].induced(x).expect("strong sets are closed");
                let Some((k, into)) = to_member(&sub) else {
                    continue;
                };
                let elems = subset::elements(x);
                let mut back = vec![0; into.len()];
                for (pos, &j) in into.iter().enumerate() {
                    back[j] = elems[pos];
                }
                for &y in &strong[k] {
                    add.push(subset::image(y, &back));
                }
            }
            for y in add {
                changed |= strong[i].insert(y);
            }
        }
        if !changed {
            break;
        }
    }
    strong
        .into_iter()
        .map(|s| {
            let mut v: Vec<Mask> = s.into_iter().collect();
            subset::sort(&mut v);
            v
        })
        .collect()
}
