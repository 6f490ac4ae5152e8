use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use super::{precondition_no_empty, ExpandedClass, Interpretation, Provenance};
use crate::classes::StructureClass;
use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::structures::{
    canonical_form_pointed, render_tuple, subset, tuple_count, tuple_index, Code, Elem,
    FunctionSymbol, Mask, Structure, Tuples, Vocabulary,
};

/// Isomorphism type of `(closure of args·value, args·value)`.
#[derive(Debug, Clone)]
pub struct PointedIsoClass {
    /// Canonical representative of the closure.
    pub shape: Arc<Structure>,
    pub args: Vec<Elem>,
    pub value: Elem,
    pub code: Code,
    /// The value lies in the closure of the arguments.
    pub codes_closure: bool,
}

impl PartialEq for PointedIsoClass {
    fn eq(&self, other: &Self) -> bool {
        self.args.len() == other.args.len() && self.code == other.code
    }
}

impl Eq for PointedIsoClass {}

impl PointedIsoClass {
    pub fn of(class: &StructureClass, m: &Structure, args: &[Elem], value: Elem) -> Result<Self> {
        let a = subset::mask_of(args);
        let codes_closure = subset::contains(class.cl(m, a)?.mask, value);
        let c = class.cl(m, a | (1u64 << value))?;
        if !c.strong {
            return Err(Error::precondition(
                "closure is not a strong substructure",
                Some(subset::render(c.mask)),
            ));
        }
        Self::in_closure(m, c.mask, args, value, codes_closure)
    }

    fn in_closure(
        m: &Structure,
        closure: Mask,
        args: &[Elem],
        value: Elem,
        codes_closure: bool,
    ) -> Result<Self> {
        let elems = subset::elements(closure);
        let rank = |x: Elem| elems.iter().position(|&e| e == x).expect("inside the closure");
        let sub = m.induced(closure)?;
        let mut point: Vec<Elem> = args.iter().map(|&x| rank(x)).collect();
        point.push(rank(value));
        let form = canonical_form_pointed(&sub, &point);
        let args = point[..args.len()].iter().map(|&x| form.relabel[x]).collect();
        Ok(PointedIsoClass {
            shape: Arc::new(form.representative(&sub)),
            args,
            value: form.relabel[point[point.len() - 1]],
            code: form.code,
            codes_closure,
        })
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for PointedIsoClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} @ {} -> {}",
            self.shape.compact(),
            render_tuple(&self.args),
            self.value
        )
    }
}

/// Least `k` such that whenever `b` lies in the closure of a set `X` in a
/// member at scale, it lies in the closure of some `A ⊆ X` with `|A| <= k`.
pub fn closure_arity(class: &StructureClass) -> Result<usize> {
    let mut cap = 0;
    for n in class.members() {
        let size = n.size();
        let all = subset::subsets(size);
        let mut cl: HashMap<Mask, Mask> = HashMap::new();
        for &x in &all {
            cl.insert(x, class.cl(n, x)?.mask);
        }
        for &x in &all {
            for b in subset::elements(cl[&x]) {
                let need = subset::subsets_of(x)
                    .into_iter()
                    .filter(|a| subset::contains(cl[a], b))
                    .map(|a| a.count_ones() as usize)
                    .min()
                    .expect("x itself qualifies");
                cap = cap.max(need);
            }
        }
    }
    Ok(cap)
}

fn injective(t: &[Elem]) -> bool {
    t.iter()
        .enumerate()
        .all(|(i, x)| !t[..i].contains(x))
}

/// Coding classes realized at `(m, args)`, keyed by arity and code, with the
/// realizing value. Two values realizing one class is a pseudo-universality
/// failure.
fn realized(
    class: &StructureClass,
    m: &Structure,
    args: &[Elem],
) -> Result<Vec<(PointedIsoClass, Elem)>> {
    let c = class.cl(m, subset::mask_of(args))?;
    if !c.strong {
        return Err(Error::precondition(
            "closure is not a strong substructure",
            Some(subset::render(c.mask)),
        ));
    }
    let mut out: Vec<(PointedIsoClass, Elem)> = Vec::new();
    for b in subset::elements(c.mask) {
        let p = PointedIsoClass::in_closure(m, c.mask, args, b, true)?;
        if let Some((_, other)) = out.iter().find(|(q, _)| *q == p) {
            return Err(Error::precondition(
                "two values realize one closure-coding class",
                Some(format!(
                    "{} at {} gives {} and {}",
                    m.compact(),
                    render_tuple(args),
                    other,
                    b
                )),
            ));
        }
        out.push((p, b));
    }
    Ok(out)
}

/// Expansion by one function per closure-coding pointed class, ordered by
/// arity and then canonical code. Arguments range over injective tuples of
/// length at most [`closure_arity`].
pub fn functorial_expansion_universal(class: &StructureClass) -> Result<ExpandedClass> {
    if let Outcome::Fail(w) = class.check_pseudo_universal()? {
        return Err(Error::precondition(
            format!("`{}` is not pseudo-universal", class.name()),
            Some(w.to_string()),
        ));
    }
    precondition_no_empty(class)?;
    let cap = closure_arity(class)?;
    let mut found: BTreeMap<(usize, Code), PointedIsoClass> = BTreeMap::new();
    for m in class.members() {
        for k in 0..=cap.min(m.size()) {
            for args in Tuples::new(m.size(), k).filter(|t| injective(t)) {
                for (p, _) in realized(class, m, &args)? {
                    found.entry((k, p.code.clone())).or_insert(p);
                }
            }
        }
    }
    let classes: Vec<PointedIsoClass> = found.into_values().collect();
    let symbols = classes
        .iter()
        .enumerate()
        .map(|(i, p)| FunctionSymbol::new(format!("fc{i}"), p.arity()))
        .collect();
    ExpandedClass::build(
        class,
        symbols,
        Provenance::Functorial,
        Interpretation::Functorial(classes),
    )
}

pub(super) fn expand(
    class: &StructureClass,
    classes: &[PointedIsoClass],
    vocab: &Arc<Vocabulary>,
    m: &Structure,
) -> Result<Structure> {
    let n = m.size();
    let base = m.vocab();
    // The value for unrealized arguments: the least class realized by a
    // single element of the closure of the empty set.
    let fallback = realized(class, m, &[])?
        .into_iter()
        .filter_map(|(p, b)| classes.iter().position(|c| *c == p).map(|i| (i, b)))
        .min()
        .map(|(_, b)| b)
        .ok_or_else(|| {
            Error::precondition("the closure of the empty set is empty", Some(m.compact()))
        })?;
    let mut funs: Vec<Vec<Elem>> = (0..base.functions.len())
        .map(|fi| m.fun_table(fi).to_vec())
        .collect();
    let max_arity = classes.iter().map(|c| c.arity()).max().unwrap_or(0);
    let mut tables: Vec<Vec<Elem>> = classes
        .iter()
        .map(|c| vec![fallback; tuple_count(n, c.arity())])
        .collect();
    for k in 0..=max_arity.min(n) {
        for args in Tuples::new(n, k).filter(|t| injective(t)) {
            let here = realized(class, m, &args)?;
            for (i, c) in classes.iter().enumerate() {
                if c.arity() != k {
                    continue;
                }
                if let Some((_, b)) = here.iter().find(|(p, _)| p == c) {
                    tables[i][tuple_index(n, &args)] = *b;
                }
            }
        }
    }
    funs.extend(tables);
    let rels = (0..base.relations.len())
        .map(|ri| m.rel_table(ri).to_vec())
        .collect();
    Ok(Structure::from_tables(vocab.clone(), n, rels, funs))
}
