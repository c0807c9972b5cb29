use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid local plan: {0}")]
    PlanInvalid(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("budget exceeded after {0} nodes")]
    BudgetExceeded(u64),
    #[error("nothing found up to {bound}: {detail}")]
    NotFound { bound: u64, detail: String },
}

pub type Result<T> = std::result::Result<T, Error>;
