use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Coarse failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Solver,
    Io,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Config => 2,
            ErrorCategory::Solver => 3,
            ErrorCategory::Io => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Config => "config",
            ErrorCategory::Solver => "solver",
            ErrorCategory::Io => "io",
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("layer {layer}: gain/loss exponent {exponent:.3e} exceeds the overflow guard")]
    DivergingGain { layer: usize, exponent: f64 },

    #[error("layer {layer}: refractive index {index} cannot carry a wave")]
    InvalidMedium { layer: usize, index: String },

    #[error("singular parameter: {0}")]
    Singularity(&'static str),

    /// R_M e^{αd} reached 1 on resonance: the cavity self-oscillates.
    #[error("oscillation threshold reached: {0}")]
    ThresholdReached(String),

    /// Solver failure at a particular probe frequency of a spectrum.
    #[error("at omega2 = {omega:.9e} rad/s: {source}")]
    AtFrequency {
        omega: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}:{line}: {message}")]
    Config {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::InvalidArgument(_) | Error::Config { .. } => ErrorCategory::Config,
            Error::DivergingGain { .. }
            | Error::InvalidMedium { .. }
            | Error::Singularity(_)
            | Error::ThresholdReached(_) => ErrorCategory::Solver,
            Error::AtFrequency { source, .. } => source.category(),
            Error::Io { .. } => ErrorCategory::Io,
        }
    }

    /// Strips frequency context, returning the underlying solver error.
    pub fn root(&self) -> &Error {
        match self {
            Error::AtFrequency { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
