//! Multiinitial and polyinitial families, multicolimits and generating sets.
//!
//! A family is searched among the minimal objects (those receiving no
//! morphism from a strictly smaller object) and then certified against every
//! object whose apex is a member at scale.

use std::fmt;
use std::sync::Arc;

use crate::classes::StructureClass;
use crate::error::{Error, Result};
use crate::limits::Diagram;
use crate::outcome::Outcome;
use crate::structures::{compose_maps, render_map, subset, Elem, Mask, Structure};


/// A cocone on a diagram: an apex with one leg per diagram object. Plain
/// class members are cocones on the empty diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone {
    pub apex: Arc<Structure>,
    pub legs: Vec<Vec<Elem>>,
}

impl fmt::Display for Cocone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.apex.compact())?;
        for l in &self.legs {
            write!(f, " {}", render_map(l))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Multiinitial,
    Polyinitial,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::Multiinitial => write!(f, "multiinitial"),
            FamilyKind::Polyinitial => write!(f, "polyinitial"),
        }
    }
}

/// A family certified against every object at `scale`; a larger scale may
/// refute it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectFamily {
    pub objects: Vec<Cocone>,
    pub kind: FamilyKind,
    pub scale: usize,
    /// Objects checked during certification.
    pub checked: usize,
}

impl ObjectFamily {
    pub fn apexes(&self) -> Vec<Arc<Structure>> {
        self.objects.iter().map(|c| c.apex.clone()).collect()
    }
}

/// An object that breaks the family condition, with the number of morphisms
/// it receives from each family object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyWitness {
    pub object: Cocone,
    pub incoming: Vec<usize>,
    pub reason: String,
}

impl fmt::Display for FamilyWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.incoming.iter().map(|c| c.to_string()).collect();
        write!(
            f,
            "{} receives [{}] morphisms from the candidates: {}",
            self.object,
            counts.join(","),
            self.reason
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyResult {
    Family(ObjectFamily),
    None(FamilyWitness),
}

impl FamilyResult {
    pub fn family(&self) -> Option<&ObjectFamily> {
        match self {
            FamilyResult::Family(f) => Some(f),
            FamilyResult::None(_) => None,
        }
    }
}

/// All cocones on `d` with apex a member at scale, ordered by apex and then
/// lexicographically by legs.
pub fn cocones(class: &StructureClass, d: &Diagram) -> Result<Vec<Cocone>> {
    d.check_arrows(class)?;
    let mut out = Vec::new();
    for n in class.members() {
        let options = d
            .objects
            .iter()
            .map(|o| class.k_embeddings(o, n))
            .collect::<Result<Vec<_>>>()?;
        let mut pick = vec![0usize; options.len()];
        if options.iter().any(|o| o.is_empty()) {
            continue;
        }
        loop {
            let legs: Vec<Vec<Elem>> = pick
                .iter()
                .zip(&options)
                .map(|(&i, o)| o[i].clone())
                .collect();
            let commutes = d
                .arrows
                .iter()
                .all(|(a, b, map)| compose_maps(&legs[*b], map) == legs[*a]);
            if commutes {
                out.push(Cocone {
                    apex: n.clone(),
                    legs,
                });
            }
            let mut k = pick.len();
            let advanced = loop {
                if k == 0 {
                    break false;
                }
                k -= 1;
                pick[k] += 1;
                if pick[k] < options[k].len() {
                    break true;
                }
                pick[k] = 0;
            };
            if !advanced {
                break;
            }
        }
    }
    Ok(out)
}

/// Morphisms of cocones: strong embeddings of apexes commuting with legs.
pub fn cocone_morphisms(class: &StructureClass, x: &Cocone, y: &Cocone) -> Result<Vec<Vec<Elem>>> {
    Ok(class
        .k_embeddings(&x.apex, &y.apex)?
        .into_iter()
        .filter(|u| {
            x.legs
                .iter()
                .zip(&y.legs)
                .all(|(lx, ly)| compose_maps(u, lx) == *ly)
        })
        .collect())
}

/// Minimal cocones, one per isomorphism class.
fn minimal_cocones(class: &StructureClass, all: &[Cocone]) -> Result<Vec<Cocone>> {
    let mut minimal: Vec<Cocone> = Vec::new();
    'outer: for x in all {
        for y in all {
            if y.apex.size() < x.apex.size() && !cocone_morphisms(class, y, x)?.is_empty() {
                continue 'outer;
            }
        }
        for m in &minimal {
            if m.apex.size() == x.apex.size() && !cocone_morphisms(class, m, x)?.is_empty() {
                continue 'outer;
            }
        }
        minimal.push(x.clone());
    }
    Ok(minimal)
}

fn search(class: &StructureClass, d: &Diagram, kind: FamilyKind) -> Result<FamilyResult> {
    let all = cocones(class, d)?;
    let candidates = minimal_cocones(class, &all)?;
    for x in &all {
        let homs: Vec<Vec<Vec<Elem>>> = candidates
            .iter()
            .map(|c| cocone_morphisms(class, c, x))
            .collect::<Result<_>>()?;
        let incoming: Vec<usize> = homs.iter().map(|h| h.len()).collect();
        let sources: Vec<usize> = (0..homs.len()).filter(|&i| !homs[i].is_empty()).collect();
        let fail = |reason: &str| {
            Ok(FamilyResult::None(FamilyWitness {
                object: x.clone(),
                incoming: incoming.clone(),
                reason: reason.to_string(),
            }))
        };
        match sources.len() {
            0 => return fail("no candidate maps to it"),
            1 => {}
            _ => return fail("several candidates map to it"),
        }
        let homs = &homs[sources[0]];
        match kind {
            FamilyKind::Multiinitial => {
                if homs.len() > 1 {
                    return fail("the morphism is not unique");
                }
            }
            FamilyKind::Polyinitial => {
                // Injective maps relate by an automorphism exactly when
                // their images agree; that automorphism is then unique.
                let image = subset::mask_of(&homs[0]);
                if homs.iter().any(|h| subset::mask_of(h) != image) {
                    return fail("two morphisms differ by no automorphism");
                }
            }
        }
    }
    Ok(FamilyResult::Family(ObjectFamily {
        objects: candidates,
        kind,
        scale: class.scale(),
        checked: all.len(),
    }))
}

pub fn multiinitial_family(class: &StructureClass) -> Result<FamilyResult> {
    search(class, &Diagram::default(), FamilyKind::Multiinitial)
}

pub fn polyinitial_family(class: &StructureClass) -> Result<FamilyResult> {
    search(class, &Diagram::default(), FamilyKind::Polyinitial)
}

/// Multiinitial family in the category of cocones on `d`.
pub fn multicolimit(class: &StructureClass, d: &Diagram) -> Result<FamilyResult> {
    search(class, d, FamilyKind::Multiinitial)
}

/// Minimum-size `a` with `cl(m, a) = m`, if one of size below `bound`
/// exists.
pub fn is_generated(class: &StructureClass, m: &Structure, bound: usize) -> Result<Option<Mask>> {
    if let Outcome::Fail(w) = class.check_admits_intersections() {
        return Err(Error::precondition(
            format!("`{}` does not admit intersections", class.name()),
            Some(w.to_string()),
        ));
    }
    if !class.member(m)? {
        return Err(Error::precondition(
            format!("not a member of `{}`", class.name()),
            Some(m.compact()),
        ));
    }
    let full = subset::full(m.size());
    for a in subset::subsets(m.size()) {
        if a.count_ones() as usize >= bound {
            break;
        }
        if class.cl(m, a)?.mask == full {
            return Ok(Some(a));
        }
    }
    Ok(None)
}
