use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge index {index} out of range (m = {m})")]
    EdgeOutOfRange { index: usize, m: usize },

    #[error("vertex id {id} out of range (n = {n})")]
    VertexOutOfRange { id: usize, n: usize },

    #[error("assignment has {got} entries, hypergraph has {expected} vertices")]
    AssignmentLength { expected: usize, got: usize },

    #[error("vertex {0} is in the core and has no finite peeling level")]
    VertexInCore(usize),

    #[error("sampling gave up after {attempts} attempts: {what}")]
    RetryBudgetExhausted { what: &'static str, attempts: usize },

    #[error("invariant violated at step {step}: {detail}")]
    InvariantViolation { step: u64, detail: String },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for errors raised by a failed runtime invariant check.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvariantViolation { .. })
    }
}
