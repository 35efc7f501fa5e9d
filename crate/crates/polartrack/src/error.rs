use std::io;
use std::path::PathBuf;

/// Errors of the file formats and the command-line front end.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read `{path}`: {source}")]
    Read { path: PathBuf, source: io::Error },
    #[error("cannot write `{path}`: {source}")]
    Write { path: PathBuf, source: io::Error },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("malformed file `{path}`: {message}")]
    Format { path: PathBuf, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error(transparent)]
    Core(#[from] polartrack_core::Error),
    #[error("cannot start worker threads: {0}")]
    Threads(String),
}

impl Error {
    /// Process exit code: 3 for file access, 4 for malformed input, 5 for
    /// invalid parameters, 1 otherwise. Usage errors exit with 2.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Read { .. } | Error::Write { .. } => 3,
            Error::Parse { .. } | Error::Format { .. } => 4,
            Error::Invalid(_) | Error::Core(polartrack_core::Error::Config(_)) => 5,
            _ => 1,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
