use thiserror::Error;

/// Errors raised by the ring-operator toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RingError {
    #[error("ring needs at least 3 points for the central-difference stencil, got {0}")]
    StencilDegenerate(usize),

    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates from its mirror by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("eigensolver did not converge after {iterations} iterations (off-diagonal norm {off_diagonal_norm:e})")]
    NoConvergence {
        iterations: usize,
        off_diagonal_norm: f64,
    },

    #[error("matrix rows have inconsistent lengths (expected {expected}, found {found})")]
    Shape { expected: usize, found: usize },

    #[error("phase undefined at sample {0}: zero amplitude")]
    UndefinedPhase(usize),

    #[error("states belong to different gauges ({0} vs {1})")]
    GaugeMismatch(f64, f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, RingError>;
