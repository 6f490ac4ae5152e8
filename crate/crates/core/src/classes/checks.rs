use std::fmt;
use std::sync::Arc;

use super::class::{closure_in, Order, StructureClass};
use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::structures::{render_map, subset, Elem, Mask, Structure};

/// `m0 ⊆ m1 ≤K ambient` and `m0 ≤K ambient`, but not `m0 ≤K m1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherenceWitness {
    pub ambient: Arc<Structure>,
    pub m1: Mask,
    pub m0: Mask,
}

impl fmt::Display for CoherenceWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "M0={} ⊆ M1={} ≤K M2={} and M0 ≤K M2, but M0 is not ≤K M1",
            subset::render(self.m0),
            subset::render(self.m1),
            self.ambient.compact()
        )
    }
}

/// A set whose closure is not a strong substructure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionWitness {
    pub member: Arc<Structure>,
    pub set: Mask,
    pub closure: Mask,
}

impl fmt::Display for IntersectionWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} A={} cl(A)={} is not a strong substructure",
            self.member.compact(),
            subset::render(self.set),
            subset::render(self.closure)
        )
    }
}

/// Two K-embeddings agreeing on `set` but not on its closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoUniversalWitness {
    pub source: Arc<Structure>,
    pub target: Arc<Structure>,
    pub f: Vec<Elem>,
    pub g: Vec<Elem>,
    pub set: Mask,
    pub closure: Mask,
}

impl fmt::Display for PseudoUniversalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "f={} g={} : {} -> {} agree on A={} but not on cl(A)={}",
            render_map(&self.f),
            render_map(&self.g),
            self.source.compact(),
            self.target.compact(),
            subset::render(self.set),
            subset::render(self.closure)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniversalWitness {
    /// A substructure of a member that is not a member.
    MissingSubstructure { member: Arc<Structure>, set: Mask },
    /// A substructure that is a member but not a strong substructure.
    NotStrong { member: Arc<Structure>, set: Mask },
}

impl fmt::Display for UniversalWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniversalWitness::MissingSubstructure { member, set } => write!(
                f,
                "substructure {} of {} is not a member",
                subset::render(*set),
                member.compact()
            ),
            UniversalWitness::NotStrong { member, set } => write!(
                f,
                "substructure {} of {} is a member but not ≤K",
                subset::render(*set),
                member.compact()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniversalReport {
    pub outcome: Outcome<UniversalWitness>,
    /// Union-closure follows from the presentation rather than from the
    /// bounded check.
    pub structural: bool,
}

/// A ≤K-chain inside an ambient member whose union fails an axiom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainWitness {
    pub ambient: Arc<Structure>,
    pub chain: Vec<Mask>,
    pub axiom: char,
}

impl fmt::Display for ChainWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let chain: Vec<String> = self.chain.iter().map(|&m| subset::render(m)).collect();
        write!(
            f,
            "axiom ({}) fails for chain {} in {}",
            self.axiom,
            chain.join(" ≤K "),
            self.ambient.compact()
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainReport {
    pub outcome: Outcome<ChainWitness>,
    pub chains: usize,
    /// Forbid presentations satisfy the chain axioms for arbitrary directed
    /// unions: a forbidden finite shape in a union lies in some stage.
    pub structural: bool,
    /// Every finite chain has a top element, so the union is that element and
    /// smoothness holds trivially.
    pub vacuous_smoothness: bool,
}

/// Bounded Löwenheim–Skolem function: `bound[a]` is the least `b` such that
/// every `a`-subset of every member lies in a strong substructure of size at
/// most `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LsEstimate {
    pub bound: Vec<usize>,
    /// Sizes `a` with no member of size at least `a`; their entry repeats the
    /// previous one.
    pub vacuous: Vec<bool>,
    /// For each size, a member and set attaining the bound.
    pub worst: Vec<Option<(Arc<Structure>, Mask)>>,
}

impl LsEstimate {
    pub fn at(&self, a: usize) -> usize {
        self.bound[a.min(self.bound.len() - 1)]
    }

    pub fn max(&self) -> usize {
        self.bound.iter().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for LsEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .bound
            .iter()
            .enumerate()
            .map(|(a, b)| {
                if self.vacuous[a] {
                    format!("{a}->{b}*")
                } else {
                    format!("{a}->{b}")
                }
            })
            .collect();
        write!(f, "{}", items.join(" "))
    }
}

/// Maps a mask of `outer` elements to positions within the sorted `frame`.
fn localise(mask: Mask, frame: Mask) -> Mask {
    subset::elements(frame)
        .iter()
        .enumerate()
        .filter(|(_, &e)| subset::contains(mask, e))
        .fold(0, |m, (i, _)| m | (1u64 << i))
}

impl StructureClass {
    fn strong_of(&self, n: &Structure) -> Vec<Mask> {
        self.strong_masks(n).expect("member at scale")
    }

    pub fn check_coherence(&self) -> Outcome<CoherenceWitness> {
        for n in self.members() {
            let strong = self.strong_of(n);
            for &m1 in &strong {
                let sub = n.induced(m1).expect("closed");
                let inner = self.strong_of(&sub);
                for &m0 in &strong {
                    if m0 != m1 && subset::is_subset(m0, m1) && !inner.contains(&localise(m0, m1))
                    {
                        return Outcome::Fail(CoherenceWitness {
                            ambient: n.clone(),
                            m1,
                            m0,
                        });
                    }
                }
            }
        }
        Outcome::Pass
    }

    /// Checks chains of length up to three of strong inclusions inside each
    /// member at scale.
    pub fn check_chain_axioms(&self) -> ChainReport {
        let mut chains = 0;
        for n in self.members() {
            let strong = self.strong_of(n);
            // Members below `n`, each with its own strong family.
            let local: Vec<Vec<Mask>> = strong
                .iter()
                .map(|&x| {
                    let sub = n.induced(x).expect("closed");
                    self.strong_of(&sub)
                        .into_iter()
                        .map(|y| subset::image(y, &subset::elements(x)))
                        .collect()
                })
                .collect();
            let below = |i: usize, j: usize| -> bool {
                strong[i] != strong[j]
                    && subset::is_subset(strong[i], strong[j])
                    && local[j].contains(&strong[i])
            };
            let mut paths: Vec<Vec<usize>> = Vec::new();
            for i in 0..strong.len() {
                for j in 0..strong.len() {
                    if below(i, j) {
                        paths.push(vec![i, j]);
                        for k in 0..strong.len() {
                            if below(j, k) {
                                paths.push(vec![i, j, k]);
                            }
                        }
                    }
                }
            }
            for p in paths {
                chains += 1;
                let top = *p.last().expect("nonempty");
                let chain: Vec<Mask> = p.iter().map(|&i| strong[i]).collect();
                // (a): the union is the top element, a member by construction.
                // (b): every stage is strong in the union.
                if let Some(_bad) = p.iter().find(|&&i| i != top && !local[top].contains(&strong[i])) {
                    return ChainReport {
                        outcome: Outcome::Fail(ChainWitness {
                            ambient: n.clone(),
                            chain,
                            axiom: 'b',
                        }),
                        chains,
                        structural: self.is_forbid(),
                        vacuous_smoothness: true,
                    };
                }
                // (c): stages strong in `n` force the union strong in `n`;
                // the union is one of the stages.
            }
        }
        ChainReport {
            outcome: Outcome::Pass,
            chains,
            structural: self.is_forbid(),
            vacuous_smoothness: true,
        }
    }

    pub fn estimate_ls(&self) -> LsEstimate {
        let s = self.scale();
        let mut raw: Vec<Option<(usize, Arc<Structure>, Mask)>> = vec![None; s + 1];
        for n in self.members() {
            let strong = self.strong_of(n);
            for a in subset::subsets(n.size()) {
                let k = a.count_ones() as usize;
                let b = strong
                    .iter()
                    .filter(|&&x| subset::is_subset(a, x))
                    .map(|x| x.count_ones() as usize)
                    .min()
                    .expect("the member itself is strong");
                if raw[k].as_ref().map_or(true, |(best, _, _)| b > *best) {
                    raw[k] = Some((b, n.clone(), a));
                }
            }
        }
        let mut bound = Vec::with_capacity(s + 1);
        let mut vacuous = Vec::with_capacity(s + 1);
        let mut worst = Vec::with_capacity(s + 1);
        let mut running = 0;
        for entry in raw {
            match entry {
                Some((b, n, a)) => {
                    running = running.max(b);
                    bound.push(running);
                    vacuous.push(false);
                    worst.push(Some((n, a)));
                }
                None => {
                    bound.push(running);
                    vacuous.push(true);
                    worst.push(None);
                }
            }
        }
        LsEstimate {
            bound,
            vacuous,
            worst,
        }
    }

    pub fn check_admits_intersections(&self) -> Outcome<IntersectionWitness> {
        for n in self.members() {
            let strong = self.strong_of(n);
            for a in subset::subsets(n.size()) {
                let c = closure_in(&strong, a, n.size());
                if !c.strong {
                    return Outcome::Fail(IntersectionWitness {
                        member: n.clone(),
                        set: a,
                        closure: c.mask,
                    });
                }
            }
        }
        Outcome::Pass
    }

    /// Fails with a precondition error when the class does not admit
    /// intersections.
    pub fn check_pseudo_universal(&self) -> Result<Outcome<PseudoUniversalWitness>> {
        if let Outcome::Fail(w) = self.check_admits_intersections() {
            return Err(Error::precondition(
                format!("`{}` does not admit intersections", self.name()),
                Some(w.to_string()),
            ));
        }
        for m in self.members() {
            let strong_m = self.strong_of(m);
            for n in self.members() {
                let embs = self.k_embeddings(m, n).expect("members");
                for f in &embs {
                    for g in &embs {
                        let agree = (0..m.size())
                            .filter(|&x| f[x] == g[x])
                            .fold(0, |acc, x| acc | (1u64 << x));
                        let full = closure_in(&strong_m, agree, m.size()).mask;
                        if subset::is_subset(full, agree) {
                            continue;
                        }
                        for a in subset::subsets_of(agree) {
                            let c = closure_in(&strong_m, a, m.size()).mask;
                            if !subset::is_subset(c, agree) {
                                return Ok(Outcome::Fail(PseudoUniversalWitness {
                                    source: m.clone(),
                                    target: n.clone(),
                                    f: f.clone(),
                                    g: g.clone(),
                                    set: a,
                                    closure: c,
                                }));
                            }
                        }
                    }
                }
            }
        }
        Ok(Outcome::Pass)
    }

    pub fn check_universal(&self) -> UniversalReport {
        for n in self.members() {
            let strong = self.strong_of(n);
            for x in subset::subsets(n.size()) {
                if !n.is_closed(x) || strong.contains(&x) {
                    continue;
                }
                let sub = n.induced(x).expect("closed");
                let member = self.member(&sub).expect("shared vocabulary");
                let outcome = Outcome::Fail(if member {
                    UniversalWitness::NotStrong {
                        member: n.clone(),
                        set: x,
                    }
                } else {
                    UniversalWitness::MissingSubstructure {
                        member: n.clone(),
                        set: x,
                    }
                });
                return UniversalReport {
                    outcome,
                    structural: false,
                };
            }
        }
        UniversalReport {
            outcome: Outcome::Pass,
            structural: self.is_forbid() && matches!(self.order(), Order::Substructure),
        }
    }

    /// Least `a0 ⊆ a` (by size, then lexicographically) with
    /// `b ⊆ cl(n, a0)`.
    pub fn local_character(&self, n: &Structure, a: Mask, b: Mask) -> Result<Mask> {
        if let Outcome::Fail(w) = self.check_admits_intersections() {
            return Err(Error::precondition(
                format!("`{}` does not admit intersections", self.name()),
                Some(w.to_string()),
            ));
        }
        let strong = self.strong_masks(n)?;
        let whole = closure_in(&strong, a, n.size()).mask;
        if !subset::is_subset(b, whole) {
            return Err(Error::precondition(
                format!(
                    "{} is not inside cl({}) = {}",
                    subset::render(b),
                    subset::render(a),
                    subset::render(whole)
                ),
                None,
            ));
        }
        Ok(subset::subsets_of(a)
            .into_iter()
            .find(|&a0| subset::is_subset(b, closure_in(&strong, a0, n.size()).mask))
            .expect("a itself qualifies"))
    }
}
