use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid metric space: {0}")]
    InvalidSpace(String),

    #[error("invalid group specification: {0}")]
    InvalidGroup(String),

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("element cap exceeded: ball would contain more than {cap} elements")]
    ResourceCap { cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("no averaging hypothesis holds: {0}")]
    NoHypothesis(String),

    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
