//! Forbidden configurations and universal theories of universal classes.
//!
//! A universal class at scale is presented by the substructure-minimal
//! non-members; a structure belongs to the class exactly when none of them
//! embeds into it. Each configuration becomes one universal sentence: the
//! negation of its full atomic diagram.

mod basis;
mod diagram;
mod theory;

pub use basis::{minimal_forbidden, omits, pointed_embeds, ForbiddenBasis};
pub use diagram::DiagramType;
pub use theory::{
    diagram_sentence, emit_universal_theory, parse_theory, universal_theory, Literal, Sentence,
    Term, Theory,
};

#[cfg(test)]
mod tests;
