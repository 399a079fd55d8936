use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("bad class data: {0}")]
    BadData(String),

    #[error("validation failed: axiom `{axiom}` violated at {index:?}")]
    Validation { axiom: String, index: Vec<usize> },

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("unknown class `{0}`")]
    UnknownClass(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
