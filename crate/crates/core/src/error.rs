use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Checked properties that simply fail (a class that does not admit
/// intersections, a missing equalizer) are reported as values, not errors.
/// This type covers malformed input and violated preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vocabulary mismatch: expected `{expected}`, found `{found}`")]
    VocabularyMismatch { expected: String, found: String },

    #[error("invalid vocabulary: {0}")]
    InvalidVocabulary(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("symbol mismatch: {0}")]
    SymbolMismatch(String),

    #[error("boundary mismatch: {0}")]
    BoundaryMismatch(String),

    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),

    #[error("invalid class: {0}")]
    InvalidClass(String),

    #[error("precondition failed: {what}{}", witness_suffix(.witness))]
    Precondition { what: String, witness: Option<String> },

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("{0}")]
    Diagnostic(String),
}

fn witness_suffix(witness: &Option<String>) -> String {
    match witness {
        Some(w) => format!(" (witness: {w})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn precondition(what: impl Into<String>, witness: Option<String>) -> Self {
        Error::Precondition {
            what: what.into(),
            witness,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
