use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),

    #[error("matrix is singular: min eigenvalue {min_eigenvalue:e} <= floor {floor:e}")]
    SingularMatrix { min_eigenvalue: f64, floor: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range (length {len})")]
    Index { index: usize, len: usize },

    #[error("moment sequence is not interior (fails at order {order})")]
    NotInterior { order: usize },

    #[error("block Hankel matrix of order {order} could not be factorized")]
    SingularHankel { order: usize },

    #[error("moment range S_{k}^+ - S_{k}^- is not positive definite")]
    SingularRange { k: usize },

    #[error("weight error: {0}")]
    Weight(String),

    #[error("too few samples: got {got}, need at least {need}")]
    TooFewSamples { got: usize, need: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
