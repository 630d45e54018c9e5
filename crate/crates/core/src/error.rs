use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid source: {0}")]
    InvalidSource(String),

    #[error("coordinate {x} outside [0, {length}]")]
    OutOfDomain { x: f64, length: f64 },

    #[error("source has zero total mass")]
    ZeroMass,

    #[error("conjugate gradient did not converge after {iterations} iterations (relative residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },

    #[error("assembled right-hand side is not zero-mean (sum {sum:e}); assembly is inconsistent")]
    InconsistentRhs { sum: f64 },

    #[error("rolling layer must be positive on every element (element {element}: {value:e})")]
    NonPositiveRolling { element: usize, value: f64 },

    #[error("no similarity profile detected within {steps} steps")]
    Undetected { steps: usize },

    #[error("non-finite value at node {node} in step {step}")]
    NonFinite { step: usize, node: usize },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
