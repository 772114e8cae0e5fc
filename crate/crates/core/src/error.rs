use thiserror::Error;

use crate::validate::ValidationReport;

/// Errors shared across the crate.
///
/// Validation failures carry the full report so callers (notably the CLI)
/// can print every violated axiom with its witness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input:\n{0}")]
    Invalid(ValidationReport),

    #[error("malformed rational: {0:?}")]
    BadRational(String),

    #[error("index {index} out of bounds for {what} of size {size}")]
    IndexOutOfBounds {
        what: &'static str,
        index: usize,
        size: usize,
    },

    #[error("tuple length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty subset")]
    EmptySubset,

    #[error("unknown relation {0:?}")]
    UnknownRelation(String),

    #[error("relation {name:?} expects arity {expected}, got tuple of length {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("{0}")]
    InvalidParameter(String),

    #[error("generators do not generate: element {0} is unreachable")]
    DoesNotGenerate(usize),

    #[error("size guard exceeded: {0}")]
    GuardExceeded(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
