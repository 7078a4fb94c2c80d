use thiserror::Error;

pub type Result<T> = std::result::Result<T, ShadowError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ShadowError {
    #[error("dimension must be at least 1, got {0}")]
    InvalidDimension(usize),

    #[error("cannot normalize the zero vector")]
    ZeroVector,

    #[error("coordinate {index} is not finite")]
    NonFinite { index: usize },

    #[error("vertex entry {index} is not ±1")]
    InvalidSign { index: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {n} exceeds the enumeration limit {limit}")]
    DimensionTooLarge { n: usize, limit: usize },

    #[error("gradient ascent did not converge within {iterations} iterations (best value {best_value})")]
    NonConvergence { best_value: f64, iterations: usize },

    #[error("degenerate Gaussian sample (n = {n}, seed = {seed}, index = {index})")]
    DegenerateSample { n: usize, seed: u64, index: u64 },
}
