use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not monotone")]
    NotMonotone,

    #[error("operator is not maximal monotone")]
    NotMaximalMonotone,

    #[error("subspace is not self-cancelling")]
    NotSelfCancelling,

    #[error("subspace is not maximal self-cancelling")]
    NotMaximalSelfCancelling,

    #[error("the ⊢-complement is not monotone; try the negated subspace")]
    DualNotMonotone,

    #[error("epsilon must be non-negative")]
    NegativeEpsilon,

    #[error("finite sample operators are not supported by {0}")]
    FiniteUnsupported(&'static str),

    #[error("finite operator must contain at least one point")]
    EmptyOperator,

    #[error("dimension {n} exceeds the supported maximum {max}")]
    DimensionTooLarge { n: usize, max: usize },

    #[error("matrix is not symmetric positive semidefinite")]
    NotPsd,

    #[error("matrix is singular")]
    Singular,

    #[error("indeterminate form: +inf + -inf")]
    Indeterminate,

    #[error("{0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
