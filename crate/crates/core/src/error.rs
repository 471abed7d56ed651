use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("site count mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{sites} sites exceeds the dense limit of {max}")]
    ResourceLimit { sites: usize, max: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular system")]
    Singular,

    #[error("state is not an eigenstate of generator {generator} (|<S>| = {magnitude:.6})")]
    NotEigenstate { generator: usize, magnitude: f64 },

    #[error("uncorrectable syndrome {0}")]
    Uncorrectable(String),

    #[error("invalid stabilizer code: {0}")]
    InvalidCode(String),

    #[error("errors {first} and {second} share syndrome {syndrome} but are not equivalent on the code space")]
    SyndromeCollision {
        first: String,
        second: String,
        syndrome: String,
    },

    #[error("state norm squared {0} differs from 1")]
    Normalization(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
