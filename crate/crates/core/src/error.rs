use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("temperature must be positive and finite, got {0}")]
    InvalidTemperature(f64),

    #[error("closed-form eigenvector coefficients unavailable: {0}")]
    AnalyticUnavailable(&'static str),

    #[error("no anticrossing in [{lo}, {hi}]: the gap is monotonic")]
    NoAnticrossing { lo: f64, hi: f64 },

    #[error("state vector is not normalized (norm {0})")]
    Unnormalized(f64),

    #[error("local coherence did not vanish after rotation ({0:e})")]
    LocalCoherenceResidual(f64),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Bad input (parameters, flags, config) as opposed to a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParams(_) | Error::InvalidTemperature(_) | Error::Config(_) | Error::NoAnticrossing { .. }
        )
    }
}
