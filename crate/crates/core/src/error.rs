use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} lies outside the domain of `{map}`")]
    Domain { map: String, point: Vec<f64> },

    #[error("dimension mismatch: `{map}` acts on R^{expected}, got R^{got}")]
    Dimension {
        map: String,
        expected: usize,
        got: usize,
    },

    #[error("`{map}` returned a non-finite value at {point:?}")]
    Evaluation { map: String, point: Vec<f64> },

    /// A difference-quotient grid hit an evaluation failure.
    #[error("evaluation failed at step h = {h:e}: {source}")]
    Grid { h: f64, source: Box<Error> },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// The boundary curve of a winding computation came too close to the origin.
    #[error("boundary curve passes within {margin:e} of the origin (tolerance {tolerance:e})")]
    Admissibility { margin: f64, tolerance: f64 },

    #[error("solver stagnated; best residual {best_residual:e} at {best_point:?}")]
    Solver {
        best_residual: f64,
        best_point: Vec<f64>,
    },

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("parse error at byte {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }
}
