use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("expression error at column {column}: {message}")]
    Expr { column: usize, message: String },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("paths `{left}` and `{right}` are not composable")]
    NotComposable { left: String, right: String },

    #[error("graph fails hypothesis {hypothesis}: {witness}")]
    Validation { hypothesis: String, witness: String },

    #[error("power iteration did not converge within {iterations} iterations (last change {last_change:e})")]
    NoConvergence { iterations: usize, last_change: f64 },

    #[error("requested level {requested} exceeds truncation level {limit}")]
    TruncationOverflow { requested: usize, limit: usize },

    #[error("exact arithmetic unavailable: {0}")]
    Inexact(String),

    #[error("provider `{provider}` violates relation `{relation}` (residual {residual:e})")]
    ProviderRelation {
        provider: String,
        relation: String,
        residual: f64,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
