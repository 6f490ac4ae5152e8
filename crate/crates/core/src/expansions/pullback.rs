use std::fmt;
use std::sync::Arc;

use super::ReductFunctor;
use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::structures::{render_map, subset, Elem, Structure};

/// Default bound on the number of legs in a family.
pub const DEFAULT_MAX_FAMILY: usize = 2;

/// One leg `B -> C` of a domain family with the codomain map `A -> F B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyLeg {
    pub object: Arc<Structure>,
    pub f: Vec<Elem>,
    pub g: Vec<Elem>,
}

/// A family whose codomain maps admit no simultaneous lift.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullbackFullWitness {
    /// The common domain target `C`.
    pub apex: Arc<Structure>,
    pub source: Arc<Structure>,
    pub legs: Vec<FamilyLeg>,
    pub reason: String,
}

impl fmt::Display for PullbackFullWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C(n={}) A={}", self.apex.size(), self.source.compact())?;
        for l in &self.legs {
            write!(
                f,
                " (B(n={}) f={} g={})",
                l.object.size(),
                render_map(&l.f),
                render_map(&l.g)
            )?;
        }
        write!(f, " : {}", self.reason)
    }
}

/// Pullback-fullness over the domain objects at scale.
///
/// Any lift `A'` of `A` is forced: `g_i` must embed it, so `A'` is what
/// `B_i` induces on the image of `g_i`, pulled back along `g_i`. When
/// `f_i: B_i -> C` is an embedding of expansions and `h = f_i g_i`, the image
/// of `g_i` is closed in `B_i` exactly when the image of `h` is closed in
/// `C`, and the pulled-back structures coincide with the one pulled back from
/// `C` along `h`. Hence every family of any size over `(C, A, h)` lifts iff
/// the image of `h` is closed in `C`, and a failure already shows on the
/// single identity leg. `max_family` is accepted for reporting and must be
/// positive.
pub fn check_pullback_full(
    functor: &ReductFunctor,
    max_family: usize,
) -> Result<Outcome<PullbackFullWitness>> {
    if max_family == 0 {
        return Err(Error::precondition("families need at least one leg", None));
    }
    let codomain = functor.codomain();
    for (_, cx) in functor.domain().entries() {
        let c = functor.object(cx)?;
        for a in codomain.members() {
            for h in codomain.k_embeddings(a, &c)? {
                let img = subset::mask_of(&h);
                let gen = cx.generated_mask(img);
                if gen != img {
                    return Ok(Outcome::Fail(PullbackFullWitness {
                        apex: cx.clone(),
                        source: a.clone(),
                        legs: vec![FamilyLeg {
                            object: cx.clone(),
                            f: cx.universe().collect(),
                            g: h,
                        }],
                        reason: format!(
                            "image {} generates {} in the expansion",
                            subset::render(img),
                            subset::render(gen)
                        ),
                    }));
                }
            }
        }
    }
    Ok(Outcome::Pass)
}
