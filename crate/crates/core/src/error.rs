use std::path::PathBuf;

/// Errors raised by every layer of the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input with the wrong shape or out-of-range values.
    #[error("rejected input: {0}")]
    InvalidInput(String),

    /// A configuration that cannot be evaluated (e.g. a schedule missing its δ).
    #[error("configuration error: {0}")]
    Config(String),

    /// A theorem hypothesis or operation precondition does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A policy was queried in a state its contract does not cover.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A malformed instance, graph, actions or summary file.
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 2 usage, 3 precondition, 4 I/O or malformed file.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Unknown { .. } | Error::Config(_) => 2,
            Error::InvalidInput(_) | Error::Precondition(_) | Error::Contract(_) => 3,
            Error::Parse { .. } | Error::Io { .. } | Error::Csv(_) => 4,
        }
    }

    /// Short machine-readable tag printed alongside the exit code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Config(_) => "config",
            Error::Precondition(_) => "precondition",
            Error::Contract(_) => "contract",
            Error::Parse { .. } => "malformed-file",
            Error::Unknown { .. } => "unknown-name",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
        }
    }
}
