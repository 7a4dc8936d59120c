use thiserror::Error;

/// Errors produced by tensor, factorization and decomposition routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TtError {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("invalid mode set {modes:?} for a tensor of order {order}")]
    InvalidModeSet { modes: Vec<usize>, order: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("contraction mismatch: {0}")]
    ContractionShape(String),
    #[error("{elements} elements exceed the dense limit of {limit}")]
    TooLarge { elements: u128, limit: u128 },
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("invalid ranks: {0}")]
    InvalidRank(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("relative error undefined for a reference tensor of zero norm")]
    ZeroNorm,
    #[error("parameter out of domain: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for TtError {
    fn from(err: std::io::Error) -> Self {
        TtError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TtError>;
