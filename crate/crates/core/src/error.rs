//! Error type shared across the simulator.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, SimError>;

/// Failure modes surfaced by the library. The CLI maps these onto process
/// exit codes (config/usage -> 1, numerical -> 2, validation -> 3).
#[derive(Debug, Error)]
pub enum SimError {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A numerical routine failed to reach its accuracy target.
    #[error("numerical failure in {context}: {reason}")]
    Numerical { context: &'static str, reason: String },

    /// Malformed or inconsistent scenario configuration.
    #[error("config error: {0}")]
    Config(String),

    /// Analytic results disagreed with the Monte Carlo cross-check.
    #[error("validation failed: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl SimError {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        SimError::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub fn numerical(context: &'static str, reason: impl Into<String>) -> Self {
        SimError::Numerical {
            context,
            reason: reason.into(),
        }
    }
}

/// Validates that `value` is finite and strictly positive.
pub fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(SimError::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

/// Validates that `value` is finite and non-negative.
pub fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(SimError::invalid(name, format!("must be finite and >= 0, got {value}")))
    }
}

/// Validates that `value` lies in `[lo, hi]`.
pub fn require_in_range(name: &'static str, value: f64, lo: f64, hi: f64) -> Result<f64> {
    if value.is_finite() && value >= lo && value <= hi {
        Ok(value)
    } else {
        Err(SimError::invalid(name, format!("must lie in [{lo}, {hi}], got {value}")))
    }
}
