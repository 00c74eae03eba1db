use thiserror::Error;

use crate::abelian::AbelianError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid simplex: {0}")]
    InvalidSimplex(String),
    #[error("not a cocycle: {0}")]
    NotACocycle(String),
    #[error("square of the twist is nonzero on {nonzero} simplices")]
    ObstructionNonzero { nonzero: usize },
    #[error("cover is not good: {0}")]
    BadCover(String),
    #[error("bad decomposition: {0}")]
    BadDecomposition(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),
    #[error("wrong twist kind: {0}")]
    TwistKind(String),
    #[error("spectral sequence not converged: {0}")]
    NotConverged(String),
    #[error("invalid cdga: {0}")]
    InvalidCdga(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("not odd: {0}")]
    NotOdd(String),
    #[error("not even: {0}")]
    NotEven(String),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
}

pub type Result<T> = std::result::Result<T, Error>;
