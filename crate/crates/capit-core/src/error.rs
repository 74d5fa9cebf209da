use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Which side of the direction pair an iterative step was updating.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => write!(f, "left"),
            Side::Right => write!(f, "right"),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    /// A direction fails its covariance normalization `v' Sigma v = 1`.
    #[error("{which} is not normalized: v' Sigma v = {value}")]
    NotNormalized { which: &'static str, value: f64 },

    #[error("{which} is not positive definite: min eigenvalue = {min_eigenvalue:e}")]
    NotPositiveDefinite {
        which: &'static str,
        min_eigenvalue: f64,
    },

    #[error("canonical correlation {0} outside (0, 1]")]
    LambdaOutOfRange(f64),

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    /// Thresholding zeroed the whole working vector; the caller may retry
    /// with a smaller level.
    #[error("thresholding killed all coordinates on the {side} side at iteration {iteration}")]
    AllCoordinatesKilled { side: Side, iteration: usize },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("data error at line {line}: {message}")]
    DataError { line: usize, message: String },
}
