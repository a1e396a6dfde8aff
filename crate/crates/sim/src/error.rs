use fuzzy_refine_core::FuzzyError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("target index {index} out of range for {n} grid points")]
    InvalidTarget { index: usize, n: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("simulation fault: {0}")]
    Fault(String),
    #[error("need at least {min} trials, got {got}")]
    TooFewTrials { min: usize, got: usize },
    #[error("weight grid has no point with w_slightly < w_moderately < w_significantly")]
    EmptyGrid,
    #[error(transparent)]
    Core(#[from] FuzzyError),
}

pub type Result<T> = std::result::Result<T, SimError>;
