use fuzzy_refine_core::FuzzyError;
use thiserror::Error;
use uuid::Uuid;

use crate::session::Status;

pub type Result<T> = std::result::Result<T, ServiceError>;

#[derive(Debug, Error)]
pub enum ServiceError {
    #[error("no session {0}")]
    NotFound(Uuid),
    #[error("session is {0}, not active")]
    NotActive(Status),
    #[error("nothing to undo")]
    EmptyUndo,
    #[error("malformed request: {0}")]
    Malformed(String),
    #[error(transparent)]
    Core(#[from] FuzzyError),
    #[error("event log: {0}")]
    Io(#[from] std::io::Error),
    #[error("event log {path}: {reason}")]
    CorruptLog { path: String, reason: String },
    #[error("unsupported event schema version {0}")]
    UnsupportedSchema(u32),
}

impl ServiceError {
    pub fn code(&self) -> &'static str {
        match self {
            ServiceError::NotFound(_) => "session_not_found",
            ServiceError::NotActive(_) => "session_not_active",
            ServiceError::EmptyUndo => "undo_stack_empty",
            ServiceError::Malformed(_) => "malformed_request",
            ServiceError::Core(e) => e.code(),
            ServiceError::Io(_) => "persistence_failed",
            ServiceError::CorruptLog { .. } => "corrupt_event_log",
            ServiceError::UnsupportedSchema(_) => "unsupported_schema",
        }
    }

    pub fn http_status(&self) -> u16 {
        match self {
            ServiceError::NotFound(_) => 404,
            ServiceError::NotActive(_) | ServiceError::EmptyUndo => 409,
            ServiceError::Core(FuzzyError::StateTerminated) => 409,
            ServiceError::Malformed(_) | ServiceError::Core(_) => 400,
            ServiceError::UnsupportedSchema(_) => 400,
            ServiceError::Io(_) | ServiceError::CorruptLog { .. } => 500,
        }
    }
}
