//! Crate-level error type with the exit-code contract used by the CLI:
//! 2 for parse errors, 3 for validation errors, 4 for computation and
//! degenerate-input errors.

use crate::agreement::AgreementError;
use crate::ingest::IngestError;
use crate::model::ModelError;
use crate::rating::ScoreError;
use thiserror::Error;

/// Broad failure category, each with a stable process exit code.
#[derive(Debug, Copy, Clone, PartialEq, Eq)]
pub enum ErrorCategory {
    Parse,
    Validation,
    Computation,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Parse => 2,
            ErrorCategory::Validation => 3,
            ErrorCategory::Computation => 4,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Agreement(#[from] AgreementError),
    #[error("{context}: {source}")]
    Io {
        context: String,
        source: std::io::Error,
    },
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Model(ModelError::Parse(_)) => ErrorCategory::Parse,
            Error::Model(ModelError::Invalid(_)) => ErrorCategory::Validation,
            Error::Ingest(IngestError::Parse(_)) => ErrorCategory::Parse,
            Error::Ingest(_) => ErrorCategory::Validation,
            Error::Score(_) => ErrorCategory::Computation,
            Error::Agreement(_) => ErrorCategory::Computation,
            Error::Io { .. } => ErrorCategory::Parse,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.category().exit_code()
    }
}
