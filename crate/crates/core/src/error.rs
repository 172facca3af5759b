use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A `.vld` / `.qtl` source failed to parse or validate.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}:{line}: {message}")]
    ParseFile {
        path: String,
        line: usize,
        message: String,
    },

    #[error("invalid tangle: {0}")]
    InvalidTangle(String),

    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },

    #[error("expected a diagram (0 legs), got a {arity}-tangle")]
    NotADiagram { arity: usize },

    #[error("quantum tangle mixes arities {0:?}; evaluate one arity at a time")]
    MixedArity(Vec<usize>),

    #[error("{what} = {value} exceeds the configured bound {bound}{hint}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        bound: usize,
        hint: &'static str,
    },

    #[error("matrix is not orthogonal: |U^T U - I| = {residual:.3e}")]
    NotOrthogonal { residual: f64 },

    #[error("model is not S2-invariant (max deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },

    #[error("model has non-real entries (max |im| = {max_imag:.3e})")]
    NotReal { max_imag: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("move site does not match the diagram: {0}")]
    StaleSite(String),

    #[error("invalid argument: {0}")]
    Usage(String),

    #[error("invalid model json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
