use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("self-loop at vertex {0} is not allowed")]
    SelfLoop(usize),

    #[error("invalid weight {weight} on edge ({u}, {v}); weights must be finite and positive")]
    InvalidWeight { u: usize, v: usize, weight: f64 },

    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),

    #[error("undefined quantity: {0}")]
    Undefined(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("seed vertex {0} has zero degree")]
    ZeroDegreeSeed(usize),

    #[error("operation requires a {0} graph")]
    WrongGraphKind(&'static str),

    #[error("no cluster pair found")]
    NotFound,

    #[error("oracle size guard exceeded: {0}")]
    SizeGuard(String),

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn undefined(msg: impl Into<String>) -> Self {
        Error::Undefined(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
