use std::path::PathBuf;

use expansive_core::Error as CoreError;

/// Process exit codes.
pub mod exit_code {
    pub const PASS: i32 = 0;
    pub const OTHER: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const FAIL: i32 = 3;
    pub const INCONCLUSIVE: i32 = 4;
    pub const RESOURCE: i32 = 5;
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    /// Malformed or schema-violating config, or parameters the library
    /// rejects.
    #[error("invalid config: {0}")]
    Config(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Core(CoreError),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => exit_code::CONFIG,
            RunError::Resource(_) => exit_code::RESOURCE,
            RunError::Io { .. } | RunError::Unsupported(_) | RunError::Core(_) => exit_code::OTHER,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> RunError {
        RunError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<CoreError> for RunError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Resource(_) | CoreError::TooLarge { .. } => RunError::Resource(e.to_string()),
            CoreError::Domain(_)
            | CoreError::Precondition(_)
            | CoreError::SpaceMismatch(_)
            | CoreError::Empty
            | CoreError::UnsupportedDirection(_) => RunError::Config(e.to_string()),
            other => RunError::Core(other),
        }
    }
}
