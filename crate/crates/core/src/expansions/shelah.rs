use std::fmt;
use std::sync::Arc;

use super::{precondition_no_empty, ExpandedClass, ExpansionWitness, Interpretation, Provenance};
use crate::classes::{LsEstimate, StructureClass};
use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::structures::{
    subset, tuple_count, Elem, FunctionSymbol, Mask, Structure, Tuples, Vocabulary,
};

/// How the directed system `s ↦ M_s` of strong substructures is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemChoice {
    /// `M_s = cl(s)`.
    Closure,
    /// Least strong substructure, by size then lexicographically, containing
    /// `s` and every `M_t` for `t ⊂ s`.
    LeastStrong,
    /// The whole member for every `s`.
    Whole,
}

impl fmt::Display for SystemChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SystemChoice::Closure => write!(f, "closure"),
            SystemChoice::LeastStrong => write!(f, "least-strong"),
            SystemChoice::Whole => write!(f, "whole"),
        }
    }
}

/// Presentation expansion with closures when the class admits
/// intersections and least strong supersets otherwise.
pub fn shelah_expansion(class: &StructureClass, ls: &LsEstimate) -> Result<ExpandedClass> {
    let choice = if class.check_admits_intersections().is_pass() {
        SystemChoice::Closure
    } else {
        SystemChoice::LeastStrong
    };
    shelah_expansion_with(class, ls, choice)
}

/// Adds `f{i}_{a}` for `i` below the largest Löwenheim–Skolem bound and
/// arities `a` up to the scale; `f{i}_{a}(x̄)` is the `i`-th element (cyclically)
/// of `M_s` for `s` the range of `x̄`.
pub fn shelah_expansion_with(
    class: &StructureClass,
    ls: &LsEstimate,
    choice: SystemChoice,
) -> Result<ExpandedClass> {
    if let Outcome::Fail(w) = class.check_coherence() {
        return Err(Error::precondition(
            format!("`{}` is not coherent", class.name()),
            Some(w.to_string()),
        ));
    }
    precondition_no_empty(class)?;
    let width = ls.max();
    if width == 0 {
        return Err(Error::precondition(
            "the Löwenheim–Skolem estimate is zero",
            Some(ls.to_string()),
        ));
    }
    build(class, choice, width, Provenance::Shelah(choice))
}

fn build(
    class: &StructureClass,
    choice: SystemChoice,
    width: usize,
    provenance: Provenance,
) -> Result<ExpandedClass> {
    let arity = class.scale();
    let mut symbols = Vec::new();
    for a in 0..=arity {
        for i in 0..width {
            symbols.push(FunctionSymbol::new(format!("f{i}_{a}"), a));
        }
    }
    ExpandedClass::build(
        class,
        symbols,
        provenance,
        Interpretation::Shelah {
            choice,
            width,
            arity,
        },
    )
}

/// `M_s` for every subset `s`, indexed by the mask.
pub(super) fn system(class: &StructureClass, choice: SystemChoice, m: &Structure) -> Result<Vec<Mask>> {
    let n = m.size();
    let full = subset::full(n);
    let mut out = vec![0; 1usize << n];
    match choice {
        SystemChoice::Whole => out.iter_mut().for_each(|x| *x = full),
        SystemChoice::Closure => {
            for s in subset::subsets(n) {
                let c = class.cl(m, s)?;
                if !c.strong {
                    return Err(Error::precondition(
                        "closure is not a strong substructure",
                        Some(format!("{} in {}", subset::render(s), m.compact())),
                    ));
                }
                out[s as usize] = c.mask;
            }
        }
        SystemChoice::LeastStrong => {
            let strong = class.strong_masks(m)?;
            for s in subset::subsets(n) {
                let need = subset::elements(s)
                    .into_iter()
                    .fold(s, |acc, x| acc | out[(s & !(1u64 << x)) as usize]);
                out[s as usize] = *strong
                    .iter()
                    .find(|&&x| subset::is_subset(need, x))
                    .expect("the member itself is strong");
            }
        }
    }
    Ok(out)
}

pub(super) fn expand(
    class: &StructureClass,
    choice: SystemChoice,
    width: usize,
    arity: usize,
    vocab: &Arc<Vocabulary>,
    m: &Structure,
) -> Result<Structure> {
    let n = m.size();
    let sys = system(class, choice, m)?;
    if let Some(s) = (0..sys.len()).find(|&s| sys[s].count_ones() as usize > width) {
        return Err(Error::precondition(
            format!("the chosen system exceeds the width {width}"),
            Some(format!(
                "{} -> {} in {}",
                subset::render(s as Mask),
                subset::render(sys[s]),
                m.compact()
            )),
        ));
    }
    let lists: Vec<Vec<Elem>> = sys.iter().map(|&x| subset::elements(x)).collect();
    let base = m.vocab();
    let mut funs: Vec<Vec<Elem>> = (0..base.functions.len())
        .map(|fi| m.fun_table(fi).to_vec())
        .collect();
    for a in 0..=arity {
        let ranges: Vec<usize> = Tuples::new(n, a)
            .map(|t| subset::mask_of(&t) as usize)
            .collect();
        debug_assert_eq!(ranges.len(), tuple_count(n, a));
        for i in 0..width {
            funs.push(
                ranges
                    .iter()
                    .map(|&s| lists[s][i % lists[s].len()])
                    .collect(),
            );
        }
    }
    let rels = (0..base.relations.len())
        .map(|ri| m.rel_table(ri).to_vec())
        .collect();
    Ok(Structure::from_tables(vocab.clone(), n, rels, funs))
}

/// A subset whose generated substructure does not reduce to a strong
/// substructure.
pub(super) fn k_prime_violation(base: &StructureClass, m: &Structure) -> Result<Option<(Mask, Mask)>> {
    let r = m.reduct(base.vocab())?;
    let strong = base.strong_masks(&r)?;
    for a in subset::subsets(m.size()) {
        let g = m.generated_mask(a);
        if !strong.contains(&g) {
            return Ok(Some((a, g)));
        }
    }
    Ok(None)
}

/// A strong substructure of the reduct that is not closed in the expansion.
pub(super) fn k_double_prime_violation(
    base: &StructureClass,
    m: &Structure,
) -> Result<Option<(Mask, Mask)>> {
    let r = m.reduct(base.vocab())?;
    for s in base.strong_masks(&r)? {
        let g = m.generated_mask(s);
        if g != s {
            return Ok(Some((s, g)));
        }
    }
    Ok(None)
}

/// Every expanded member keeps its strong substructures closed.
pub fn check_k_double_prime(e: &ExpandedClass) -> Result<Outcome<ExpansionWitness>> {
    for (_, x) in e.entries() {
        if let Some((s, g)) = k_double_prime_violation(e.base(), x)? {
            return Ok(Outcome::Fail(ExpansionWitness {
                member: x.clone(),
                set: s,
                reason: format!("generates {}", subset::render(g)),
            }));
        }
    }
    Ok(Outcome::Pass)
}

/// Rebuilds a presentation expansion on closures so that strong
/// substructures of reducts are closed.
pub fn k_double_prime(e: &ExpandedClass) -> Result<ExpandedClass> {
    let Provenance::Shelah(_) = e.provenance() else {
        return Err(Error::precondition(
            "expects a presentation expansion",
            Some(e.provenance().to_string()),
        ));
    };
    if let Outcome::Fail(w) = e.base().check_admits_intersections() {
        return Err(Error::precondition(
            format!("`{}` does not admit intersections", e.base().name()),
            Some(w.to_string()),
        ));
    }
    let (width, _) = e.shelah_shape().expect("presentation expansion");
    build(e.base(), SystemChoice::Closure, width, Provenance::KDoublePrime)
}
