use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has eigenvalue {0:e} below the PSD tolerance")]
    NotPositive(f64),

    #[error("matrix is singular (smallest eigenvalue {0:e}); use the pseudo-inverse")]
    Singular(f64),

    #[error("given rows are not orthonormal (max deviation {0:e})")]
    NotOrthonormal(f64),

    #[error("Gram matrices differ at pair ({i}, {j}) by {deviation:e}")]
    GramMismatch { i: usize, j: usize, deviation: f64 },

    #[error("step unitary misses its contract by {0:e}")]
    StepContract(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error(
        "slice amplitude {beta} is at or above {limit}; at least n = {min_slices} slices are needed"
    )]
    SliceAmplitudeTooLarge {
        beta: f64,
        limit: f64,
        min_slices: usize,
    },

    #[error("unsupported alphabet: {0}")]
    UnsupportedAlphabet(String),

    #[error("no sign change of ab - cd on {grid} grid points over d in [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64, grid: usize },

    #[error("configuration error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("solver did not converge after {iterations} iterations (last change {last_change:e})")]
    NotConverged { iterations: usize, last_change: f64 },
}

impl Error {
    pub fn config(field: &str, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.to_string(),
            message: message.into(),
        }
    }

    /// Errors caused by the request itself: bad configuration, unreadable
    /// files, out-of-domain parameters.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Config { .. }
                | Error::Io(_)
                | Error::InvalidParameter(_)
                | Error::SliceAmplitudeTooLarge { .. }
                | Error::UnsupportedAlphabet(_)
        )
    }

    /// Numerical failures, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotConverged { .. } | Error::NoRoot { .. } | Error::StepContract(_)
        )
    }
}
