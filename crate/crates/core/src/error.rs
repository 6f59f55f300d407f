use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch between operands")]
    GridMismatch,

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The inverse transform produced an imaginary part larger than rounding
    /// allows; the spectrum was not Hermitian.
    #[error("imaginary residue {residue:e} exceeds 1e-12 of amplitude {amplitude:e}")]
    ImaginaryResidue { residue: f64, amplitude: f64 },

    #[error("nonlinearity overflow at index {index} (max |u| = {max_abs:e})")]
    Overflow { index: usize, max_abs: f64 },

    #[error("history kernel needs {entries} entries, limit is {limit}")]
    HistoryTooLarge { entries: usize, limit: usize },

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("integrator failure on mode {mode}: {reason}")]
    Integrator { mode: usize, reason: String },

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("instability detected: {0}")]
    Unstable(String),

    #[error("degenerate series: {0}")]
    Degenerate(String),

    #[error("empty trajectory")]
    EmptyTrajectory,
}
