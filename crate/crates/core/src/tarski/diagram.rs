use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::structures::{canonical_form_pointed, subset, Code, Elem, Structure};

/// A finite structure with a distinguished tuple that generates it, stored
/// in pointed canonical form.
#[derive(Clone)]
pub struct DiagramType {
    shape: Arc<Structure>,
    point: Vec<Elem>,
    code: Code,
}

impl DiagramType {
    /// Fails unless `point` generates `shape`.
    pub fn new(shape: &Structure, point: &[Elem]) -> Result<Self> {
        if point.iter().any(|&p| p >= shape.size()) {
            return Err(Error::InvalidStructure(format!(
                "point element outside universe of size {}",
                shape.size()
            )));
        }
        let span = shape.generated_mask(subset::mask_of(point));
        if span != subset::full(shape.size()) {
            return Err(Error::InvalidStructure(format!(
                "point {} generates only {} of {}",
                crate::structures::render_tuple(point),
                subset::render(span),
                shape.compact()
            )));
        }
        let form = canonical_form_pointed(shape, point);
        let canon = form.representative(shape);
        let point = point.iter().map(|&p| form.relabel[p]).collect();
        Ok(DiagramType {
            shape: Arc::new(canon),
            point,
            code: form.code,
        })
    }

    /// Points `shape` at its least generating subset (by size, then
    /// lexicographically), listed in increasing order.
    pub fn of_structure(shape: &Structure) -> Self {
        let full = subset::full(shape.size());
        let generator = subset::subsets(shape.size())
            .into_iter()
            .find(|&m| shape.generated_mask(m) == full)
            .expect("the whole universe generates");
        DiagramType::new(shape, &subset::elements(generator)).expect("generating point")
    }

    pub fn shape(&self) -> &Arc<Structure> {
        &self.shape
    }

    pub fn point(&self) -> &[Elem] {
        &self.point
    }

    pub fn code(&self) -> &Code {
        &self.code
    }
}

impl PartialEq for DiagramType {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for DiagramType {}

impl PartialOrd for DiagramType {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DiagramType {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code.cmp(&other.code)
    }
}

impl fmt::Debug for DiagramType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DiagramType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} @ {}",
            self.shape.compact(),
            crate::structures::render_tuple(&self.point)
        )
    }
}
