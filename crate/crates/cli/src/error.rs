use thiserror::Error;

/// Failure of a CLI run, carrying its process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] rotdirac_core::Error),

    #[error("{failed} check(s) failed: {names}")]
    ChecksFailed { failed: usize, names: String },
}

impl CliError {
    /// 1 for configuration and I/O, 2 for tolerance or verification failures, 3 for the integrator.
    pub fn exit_code(&self) -> u8 {
        use rotdirac_core::Error as E;
        match self {
            CliError::Config(_) | CliError::Io(_) => 1,
            CliError::ChecksFailed { .. } => 2,
            CliError::Core(e) => match e {
                E::TruncationWarning { .. } | E::ResidualTooLarge { .. } => 2,
                E::StepFailure { .. } => 3,
                E::InvalidConfig(_) | E::InvalidQuantumNumbers(_) | E::DegenerateBranch | E::ConfigMismatch => 1,
            },
        }
    }
}
