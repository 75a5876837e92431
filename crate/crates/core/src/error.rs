use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("operands live in different free modules")]
    ModuleMismatch,
    #[error("input is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("module has infinite length")]
    InfiniteLength,
    #[error("ideal is not generated in a single degree; truncate it first (I_{{>=d}})")]
    NotEquigenerated,
    #[error("parse error at {line}:{column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("computation exceeded its time budget")]
    Budget,
    #[error("internal consistency check failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;
