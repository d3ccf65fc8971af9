use thiserror::Error;

/// Errors surfaced by the convolution kernels, the knapsack solvers and the
/// text formats.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("sequence value {value} at index {index} exceeds the supported bound 2^40")]
    ValueBound { index: usize, value: i64 },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),

    #[error("index {index} is outside the domain [{lo}..{hi}]")]
    OutOfDomain { index: usize, lo: usize, hi: usize },

    #[error("diagonal {diagonal} is outside [0..{max}]")]
    DiagonalOutOfRange { diagonal: usize, max: usize },

    #[error("point ({index}, {value}) lies outside its declared band")]
    BandViolation { index: usize, value: i64 },

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("knapsack instance has no items")]
    EmptyInstance,

    #[error("invalid item {index}: profit and weight must be positive")]
    InvalidItem { index: usize },

    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),

    #[error("no witness found for entry {index} at level {level}")]
    WitnessNotFound { level: usize, index: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
