use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or mismatched arguments (dimensions, ranges, factorizations).
    #[error("invalid argument: {0}")]
    Argument(String),

    /// A dimension exceeded the desk-scale cap.
    #[error("dimension {dim} exceeds the cap of {cap}")]
    Capacity { dim: usize, cap: usize },

    /// A value violated one of its type invariants.
    #[error("invariant violated: {0}")]
    Invariant(String),

    /// A constructed object failed its own post-construction check.
    #[error("construction failed: {0}")]
    Construction(String),

    /// A JSON document failed validation; `path` points at the offending field.
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Argument(msg.into()))
}
