use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("contraction order {r} out of range 1..={max}")]
    ContractionOrder { r: usize, max: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("expected {expected} indices, got {got}")]
    WrongArity { expected: usize, got: usize },

    #[error("duplicate entry for canonical index {0:?}")]
    DuplicateEntry(Vec<usize>),

    #[error("kernel has zero norm")]
    ZeroKernel,

    #[error("tensor is not symmetric at {0:?}")]
    NotSymmetric(Vec<usize>),

    #[error("invalid argument: {0}")]
    Domain(String),

    #[error("{what}: requested {requested} exceeds cap {cap}")]
    CapExceeded { what: &'static str, requested: u128, cap: u128 },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("stream index {0} used by more than one task")]
    StreamCollision(u64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
