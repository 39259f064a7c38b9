use thiserror::Error;

/// Errors produced by the numerical kernels and the reporting layer.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("regime error: {0}")]
    Regime(String),

    #[error("free field (eta = 0) has no bound states")]
    FreeField,

    #[error("position z = {z} lies outside the well interior |z| < {half_width}")]
    OutOfRegion { z: f64, half_width: f64 },

    #[error("numerical non-convergence: {what} (spread {spread:e} exceeds tolerance {tol:e})")]
    NonConvergence { what: String, spread: f64, tol: f64 },

    #[error("singular contour: {0}")]
    SingularContour(String),

    #[error("usage error: {0}")]
    Usage(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Process exit status for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidParameter { .. } | Error::Usage(_) | Error::OutOfRegion { .. } => 2,
            Error::Regime(_) | Error::FreeField => 3,
            Error::NonConvergence { .. } | Error::SingularContour(_) => 4,
            Error::Io(_) => 5,
        }
    }

    /// Short category tag printed in front of CLI error lines.
    pub fn category(&self) -> &'static str {
        match self.exit_code() {
            2 => "usage",
            3 => "regime",
            4 => "numerics",
            _ => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
