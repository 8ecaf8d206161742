use thiserror::Error;

/// Errors produced by the graphlet toolkit.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("graph is disconnected: {0}")]
    Disconnected(String),

    #[error("size bound violated: {0}")]
    SizeBound(String),

    #[error("connectivity hypothesis violated: {0}")]
    ConnectivityHypothesis(String),

    #[error("data integrity failure: {0}")]
    Integrity(String),

    #[error("hypotheses not met: {0}")]
    Hypothesis(String),

    #[error("count overflow")]
    Overflow,

    #[error("outside exhaustive range: {0}")]
    Scale(String),
}

pub type Result<T> = std::result::Result<T, Error>;
