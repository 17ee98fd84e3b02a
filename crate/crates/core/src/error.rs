use thiserror::Error;

/// Errors shared by every layer of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),
    #[error("size guard exceeded: {what} is {actual}, limit {limit}")]
    GuardExceeded {
        what: String,
        actual: u64,
        limit: u64,
    },
    #[error("side mismatch: {0}")]
    SideMismatch(String),
    #[error("module mismatch: {0}")]
    ModuleMismatch(String),
    #[error("deadline exceeded while {stage}")]
    Timeout { stage: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// An unconditional law failed. This is always an implementation bug,
    /// never a property of the input.
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
