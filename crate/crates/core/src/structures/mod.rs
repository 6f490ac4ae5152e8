//! Finite vocabularies, structures, morphisms, canonical forms and
//! exhaustive enumeration.

mod canon;
mod enumerate;
mod morphism;
mod structure;
pub mod subset;
mod vocab;

/// Universe elements are `0..size`.
pub type Elem = usize;

pub use canon::{
    canonical_code, canonical_form, canonical_form_pointed, canonicalize, CanonicalForm, Code,
};
pub use enumerate::{enumerate_structures, enumerate_structures_with_ceiling, DEFAULT_CEILING};
pub use morphism::{
    check_map, compose, compose_maps, embedding_maps, embeds, enumerate_embeddings,
    generated_substructure, homomorphism_maps, is_embedding, is_homomorphism, render_map,
    Morphism, MorphismKind, Violation,
};
pub use structure::{
    render_tuple, tuple_at, tuple_count, tuple_index, Structure, StructureBuilder, Tuples,
    TuplesOver,
};
pub use subset::Mask;
pub use vocab::{FunctionSymbol, RelationSymbol, Vocabulary};

use std::sync::Arc;

use crate::error::Result;

/// Reduct of `m` to the sub-vocabulary `sub`.
pub fn reduct(m: &Structure, sub: &Arc<Vocabulary>) -> Result<Structure> {
    m.reduct(sub)
}
