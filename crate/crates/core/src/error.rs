use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error(
        "local-oscillator phase {phase} rad gives |sin| < 1e-6; amplitude inversion is singular"
    )]
    DegenerateLoPhase { phase: f64 },

    #[error("local-oscillator phase must be {expected} rad for this readout, got {actual} rad")]
    LoPhaseMismatch { expected: f64, actual: f64 },

    #[error("no half-maximum crossing brackets the central peak")]
    NoHalfMaximum,

    #[error("estimated baseline phase {phase} rad exceeds kL = {kl} rad")]
    UnphysicalAngle { phase: f64, kl: f64 },

    #[error("target range {range} m is not positive at t = {time} s")]
    NonPositiveRange { range: f64, time: f64 },

    #[error("differentiation window {window} is invalid for {len} samples (must be odd, >= 3 and <= len)")]
    DifferentiationWindow { window: usize, len: usize },

    #[error("config: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Fails with [`Error::InvalidParameter`] unless `value` is finite and `> 0`.
pub(crate) fn ensure_positive(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

pub(crate) fn ensure_nonnegative(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and >= 0, got {value}"),
        ))
    }
}
