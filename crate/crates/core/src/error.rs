use thiserror::Error;

/// Errors raised across the workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("invalid signature: {0}")]
    InvalidSignature(String),
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("index {index} out of range for a structure of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("size {requested} exceeds the cap {cap} of {what}")]
    CapExceeded {
        what: String,
        requested: usize,
        cap: usize,
    },
    #[error("unknown class {0:?}")]
    UnknownClass(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("type mismatch: {0}")]
    TypeMismatch(String),
    #[error("not an equivalence relation: {0}")]
    NotEquivalenceRelation(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid stabilizer class: {0}")]
    InvalidStabilizerClass(String),
    #[error("internal consistency error: {0}")]
    Consistency(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
