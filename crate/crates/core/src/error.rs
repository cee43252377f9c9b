use thiserror::Error;

pub type Result<T, E = BorelError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BorelError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("vectors do not span the ambient space (rank {rank} < {dim})")]
    NonSpanning { rank: usize, dim: usize },

    #[error("index {index} out of range for a tuple of length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("input not in general position: {0}")]
    NotGeneric(String),

    #[error("determinant must be 1, found {0}")]
    Determinant(String),

    #[error("rank-deficient flag at vertex {0}")]
    RankDeficientFlag(String),

    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("orientation must be +1 or -1, found {0}")]
    Orientation(i64),

    #[error("missing decoration for vertex {0}")]
    MissingDecoration(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl BorelError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        let path = path.into();
        BorelError::Schema { path: if path.is_empty() { ".".into() } else { path }, message: message.into() }
    }

    /// Prefixes the field path of a schema error.
    pub fn within(self, prefix: &str) -> Self {
        match self {
            BorelError::Schema { path, message } => {
                let path = if path == "." { prefix.to_string() } else { format!("{prefix}{path}") };
                BorelError::Schema { path, message }
            }
            other => other,
        }
    }

    /// True for malformed input, false for well-formed input that violates an invariant.
    pub fn is_schema(&self) -> bool {
        matches!(self, BorelError::Schema { .. } | BorelError::Io(_))
    }
}
