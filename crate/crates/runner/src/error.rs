use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    /// Config file that does not match the schema of its kind.
    #[error("config error at `{key}`: {message}")]
    Schema { key: String, message: String },
    #[error(transparent)]
    Module(#[from] psmom_core::Error),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("verification failed: {0}")]
    Verify(String),
}

impl RunError {
    pub fn schema(key: impl Into<String>, message: impl Into<String>) -> Self {
        RunError::Schema { key: key.into(), message: message.into() }
    }

    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        RunError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Verify(_) => 1,
            RunError::Schema { .. } => 2,
            RunError::Module(_) => 3,
            RunError::Io { .. } => 4,
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;
