//! Abstract classes `(K, ≤K)` and bounded checks of their axioms.

mod checks;
mod class;

pub use checks::{
    ChainReport, ChainWitness, CoherenceWitness, IntersectionWitness, LsEstimate,
    PseudoUniversalWitness, UniversalReport, UniversalWitness,
};
pub use class::{Closure, Order, OrderPair, Presentation, StructureClass, DEFAULT_SCALE};
