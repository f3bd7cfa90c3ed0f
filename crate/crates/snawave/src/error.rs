use std::io;
use std::path::PathBuf;

use snawave_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(#[from] CoreError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type AppResult<T> = Result<T, AppError>;

impl AppError {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        AppError::Io { path: path.into(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::Numeric(CoreError::InvalidParameter(_)) | AppError::Numeric(CoreError::FilterNotTabulated(_)) => 2,
            AppError::Numeric(_) => 3,
            AppError::Io { .. } | AppError::Format { .. } => 4,
        }
    }
}
