use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vector has {got} entries but the quiver has {expected} vertices")]
    DomainMismatch { expected: usize, got: usize },

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("invalid bipartite spec: {0}")]
    InvalidSpec(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("cannot pad a partition of length {length} to {requested} parts")]
    PaddingTooShort { length: usize, requested: usize },

    #[error("not an exceptional sequence: pairing <eps_{i}, eps_{j}> = {value}")]
    NotExceptional { i: usize, j: usize, value: String },

    #[error("weight is not integral at vertex {0}")]
    NonIntegral(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("enumeration budget of {budget} steps exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("integer overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
