use std::path::PathBuf;

/// Errors raised by the relay model, the dual solver and the experiment driver.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    Domain { name: &'static str, reason: String },

    #[error("matrix is singular or ill-conditioned (condition number {condition:e})")]
    Singular { condition: f64 },

    #[error("matrix is not positive definite (pivot {pivot:e})")]
    NotPositiveDefinite { pivot: f64 },

    #[error("all singular values are zero; no power can be allocated")]
    DegenerateChannel,

    #[error("dual iteration did not converge after {iterations} iterations (lambda {lambda}, balance residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        lambda: f64,
        residual: f64,
    },

    #[error("sweep point kappa={kappa} dB/m, d={distance} m: {source}")]
    SweepPoint {
        kappa: f64,
        distance: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv line {line}: {reason}")]
    Csv { line: usize, reason: String },
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// True when the root cause is a failure of the dual iteration to converge.
    pub fn is_non_convergence(&self) -> bool {
        match self {
            Error::NonConvergence { .. } => true,
            Error::SweepPoint { source, .. } => source.is_non_convergence(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
