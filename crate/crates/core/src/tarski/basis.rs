use std::fmt;

use super::DiagramType;
use crate::classes::StructureClass;
use crate::error::{Error, Result};
use crate::outcome::Outcome;
use crate::structures::{embeds, enumerate_structures, subset, Structure};

/// Minimal forbidden configurations of a universal class, complete for
/// structures of size at most `scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForbiddenBasis {
    pub gamma: Vec<DiagramType>,
    pub scale: usize,
}

impl fmt::Display for ForbiddenBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "forbidden basis certified to scale {}", self.scale)?;
        for d in &self.gamma {
            writeln!(f, "  {d}")?;
        }
        Ok(())
    }
}

/// Whether the shape of `d` embeds into `m`.
pub fn pointed_embeds(d: &DiagramType, m: &Structure) -> Result<bool> {
    embeds(d.shape(), m)
}

pub fn omits(m: &Structure, basis: &ForbiddenBasis) -> Result<bool> {
    for d in &basis.gamma {
        if pointed_embeds(d, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Non-members of size at most the class scale all of whose proper
/// substructures are members, one per isomorphism class.
pub fn minimal_forbidden(class: &StructureClass) -> Result<ForbiddenBasis> {
    if let Outcome::Fail(w) = class.check_universal().outcome {
        return Err(Error::precondition(
            format!("`{}` is not universal", class.name()),
            Some(w.to_string()),
        ));
    }
    let mut gamma = Vec::new();
    for m in enumerate_structures(class.vocab(), class.scale())? {
        if class.member(&m)? {
            continue;
        }
        let full = subset::full(m.size());
        let minimal = subset::subsets(m.size())
            .into_iter()
            .filter(|&x| x != full && m.is_closed(x))
            .all(|x| class.member(&m.induced(x).expect("closed")).expect("shared vocabulary"));
        if minimal {
            gamma.push(DiagramType::of_structure(&m));
        }
    }
    gamma.sort();
    Ok(ForbiddenBasis {
        gamma,
        scale: class.scale(),
    })
}
