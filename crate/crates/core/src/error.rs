use crate::report::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid instance:\n{0}")]
    InvalidInstance(ValidationReport),

    /// A solution or model refers to something that does not exist.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("unbounded objective")]
    Unbounded,

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// Raised when an algorithm's own invariants break, which only happens
    /// for infeasible or corrupted input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Infeasible(_) | Error::Unbounded => 3,
            Error::ResourceLimit(_) => 4,
            Error::Io(_) | Error::Internal(_) => 1,
            _ => 2,
        }
    }
}
