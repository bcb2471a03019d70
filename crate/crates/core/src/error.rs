use thiserror::Error;

/// Errors raised by the complex, operator, model and experiment layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty simplex: a simplex needs at least one vertex")]
    EmptySimplex,

    #[error("simplex {0} is not in the complex")]
    UnknownSimplex(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("shape mismatch: expected {expected}, got {actual}")]
    ShapeMismatch { expected: String, actual: String },

    #[error("complex has no {0}-simplices")]
    EmptyDimension(usize),

    #[error("dense eigensolver limited to {limit} simplices but got {size}; use the polynomial filters instead")]
    TooLargeForEigensolver { size: usize, limit: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite gradient in {0}")]
    NonFiniteGradient(String),

    #[error("training diverged at iteration {iteration}: loss = {loss}")]
    Diverged { iteration: usize, loss: f64 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
