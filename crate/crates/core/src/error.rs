use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("regular-branch construction requested for an E0 = -1 mode; the lower spinor cannot be eliminated")]
    DegenerateBranch,

    #[error("modes were built with different physical configurations")]
    ConfigMismatch,

    #[error("truncation leakage {leakage:.3e} exceeds tolerance {tolerance:.3e}")]
    TruncationWarning { leakage: f64, tolerance: f64 },

    #[error("integrator could not meet tolerance; last good time t = {t}")]
    StepFailure { t: f64 },

    #[error("eigenpair residual {residual:.3e} exceeds limit {limit:.3e}")]
    ResidualTooLarge { residual: f64, limit: f64 },
}
