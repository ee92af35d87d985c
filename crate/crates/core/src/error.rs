use thiserror::Error;

use crate::metrics::MetricsError;

/// Errors raised by model fitting, the experiment harness and I/O.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GreyError {
    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("singular normal system (condition estimate {condition:.3e} exceeds {limit:.0e})")]
    SingularSystem { condition: f64, limit: f64 },

    #[error("singular parameters: {0}")]
    SingularParameters(String),

    #[error("non-finite model output: {0}")]
    NonFinite(String),

    #[error("unknown dataset `{0}`")]
    UnknownDataset(String),

    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl GreyError {
    /// True for failures caused by the numerics rather than by the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            GreyError::SingularSystem { .. } | GreyError::SingularParameters(_) | GreyError::NonFinite(_)
        )
    }
}

pub type Result<T, E = GreyError> = std::result::Result<T, E>;
