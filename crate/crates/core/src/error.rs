use thiserror::Error;

pub type Result<T> = std::result::Result<T, FuzzyError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzyError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("inconsistent membership spec: {0}")]
    SpecInconsistency(String),
    #[error("search state already terminated")]
    StateTerminated,
}

impl FuzzyError {
    /// Stable machine-readable code, used by the service layer.
    pub fn code(&self) -> &'static str {
        match self {
            FuzzyError::InvalidArgument(_) => "invalid_argument",
            FuzzyError::SpecInconsistency(_) => "spec_inconsistency",
            FuzzyError::StateTerminated => "state_terminated",
        }
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> FuzzyError {
    FuzzyError::InvalidArgument(msg.into())
}
