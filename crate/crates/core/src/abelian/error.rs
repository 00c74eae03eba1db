use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AbelianError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("d∘d is nonzero")]
    NotAComplex,
    #[error("second group is not contained in the first")]
    NotASubgroup,
    #[error("map {index}: target of one map is not the source of the next")]
    CompositionMismatch { index: usize },
    #[error("map {index} does not descend to the quotient")]
    IllDefinedMap { index: usize },
}
