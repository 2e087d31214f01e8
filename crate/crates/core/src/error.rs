use thiserror::Error;

/// Errors shared across the engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("out of bounds: {0}")]
    OutOfBounds(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error("invalid knot: {0}")]
    InvalidKnot(String),

    #[error("illegal move: {0}")]
    IllegalMove(String),

    #[error("projection degenerate: {0}")]
    Degenerate(String),

    #[error("pipeline failure: {0}")]
    Pipeline(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
