use thiserror::Error;

/// Errors raised while building instances, scoring or solving.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the task set is empty")]
    EmptyTaskSet,
    #[error("task `{0}` has length 0; lengths must be positive")]
    ZeroLength(String),
    #[error("unknown task `{0}`")]
    UnknownTask(String),
    #[error("task `{0}` appears more than once")]
    DuplicateTask(String),
    #[error("task `{0}` is missing from the schedule")]
    MissingTask(String),
    #[error("task index {index} out of range for {n} tasks")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("profile has no voters")]
    NoVoters,
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("schedule covers {found} tasks but the task set has {expected}")]
    MismatchedTaskSet { expected: usize, found: usize },
    #[error("{n} tasks exceeds the solver limit of {max}")]
    TooManyTasks { n: usize, max: usize },
    #[error("scores for this instance could overflow 64-bit integers")]
    Overflow,
    #[error("invalid instance specification: {0}")]
    InvalidSpec(String),
    #[error("invalid length reduction: {0}")]
    InvalidReduction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
