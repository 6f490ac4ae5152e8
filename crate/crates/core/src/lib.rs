//! Finite first-order structures and abstract classes of them.
//!
//! The crate decides, exhaustively up to a size bound, the defining
//! properties of abstract classes (coherence, admitting intersections,
//! pseudo-universality, universality), extracts forbidden-configuration
//! presentations of universal classes, computes limits and multi/poly-initial
//! families in the category of strong embeddings, and builds the functorial
//! and presentation-theorem expansions. A small line-oriented DSL and the
//! `finclass` binary expose all of it.

pub mod classes;
pub mod cli;
pub mod dsl;
pub mod error;
pub mod expansions;
pub mod fixtures;
pub mod limits;
pub mod multi;
mod outcome;
pub mod structures;
pub mod tarski;

pub use error::{Error, Result};
pub use outcome::Outcome;
