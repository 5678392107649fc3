use thiserror::Error;

/// Errors raised by the simulation, closed-form and analysis layers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("mode index {index} out of range for a {n_modes}-mode state")]
    ModeOutOfRange { index: usize, n_modes: usize },

    #[error("numerically degenerate: {0}")]
    NumericDegeneracy(String),

    /// The detection signal is flat at the operating point, so error
    /// propagation gives an unbounded sensitivity.
    #[error("stationary signal at phi = {phi}: |d<S>/dphi| = {derivative:e}")]
    StationaryPoint { phi: f64, derivative: f64 },

    #[error("singular closed form: {0}")]
    Singular(String),

    #[error("search failed: {0}")]
    SearchFailure(String),

    #[error("no crossing: {0}")]
    NoCrossing(String),

    #[error("Fock truncation exceeded: tail mass {tail_mass:e} > bound {bound:e}")]
    TruncationExceeded { tail_mass: f64, bound: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    /// True for failures that come from the numerics rather than from the
    /// caller's arguments.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NumericDegeneracy(_)
                | Error::StationaryPoint { .. }
                | Error::Singular(_)
                | Error::SearchFailure(_)
                | Error::NoCrossing(_)
                | Error::TruncationExceeded { .. }
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
