use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the spectral operators, the model and the run driver.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("grid mismatch: {left}x{left} (L = {left_len}) vs {right}x{right} (L = {right_len})")]
    GridMismatch {
        left: usize,
        left_len: f64,
        right: usize,
        right_len: f64,
    },

    #[error("blow-up detected at t = {t}: {reason}")]
    Blowup { t: f64, reason: BlowupReason },

    #[error("configuration error at line {line}: {msg}")]
    Config { line: usize, msg: String },

    #[error("snapshot format error: {0}")]
    Snapshot(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Why an integration run was aborted.
#[derive(Clone, Debug, PartialEq)]
pub enum BlowupReason {
    NonFinite,
    StepUnderflow { dt: f64, dt_min: f64 },
    NormCeiling { norm: &'static str, value: f64, ceiling: f64 },
}

impl std::fmt::Display for BlowupReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BlowupReason::NonFinite => write!(f, "non-finite coefficients"),
            BlowupReason::StepUnderflow { dt, dt_min } => {
                write!(f, "time step {dt:e} fell below dt_min = {dt_min:e}")
            }
            BlowupReason::NormCeiling {
                norm,
                value,
                ceiling,
            } => write!(f, "{norm} = {value:e} exceeds ceiling {ceiling:e}"),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
