use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("Weyl group of order {order} exceeds the cap {cap}; pass the allow-huge flag to stream it")]
    CapExceeded { order: u64, cap: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
