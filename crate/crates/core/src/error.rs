use thiserror::Error;

/// Errors produced anywhere in the toolkit.
///
/// The variants split into two families that callers (notably the CLI) treat
/// differently: input problems (`Domain`, `Validation`, `Parameter`, `Parse`,
/// `Export`) and numerical/runtime failures (`PostSelectionImpossible`,
/// `Solver`, `Degenerate`).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("post-selection impossible: outcome probability {probability:.3e} is below 1e-12")]
    PostSelectionImpossible { probability: f64 },
    #[error("solver error: {0}")]
    Solver(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("cannot export gate {index} ({gate}): composite gates have no QASM form")]
    Export { index: usize, gate: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by bad input rather than by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::Validation(_)
                | Error::Parameter(_)
                | Error::Parse(_)
                | Error::Export { .. }
                | Error::Json(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! domain {
    ($($arg:tt)*) => { $crate::error::Error::Domain(format!($($arg)*)) };
}
macro_rules! param {
    ($($arg:tt)*) => { $crate::error::Error::Parameter(format!($($arg)*)) };
}
pub(crate) use {domain, param};
