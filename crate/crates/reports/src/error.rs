use thiserror::Error;

pub type Result<T, E = ReportError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Core(#[from] g2d_core::Error),

    /// A constant-free inequality failed on emitted data.
    #[error("assertion failed: {0}")]
    Assertion(String),

    #[error("time budget exhausted before {0}")]
    Budget(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl ReportError {
    /// Process exit status for the CLI: 2 for assertion failures, 3 for
    /// budget or size-cap refusals, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            ReportError::Assertion(_) => 2,
            ReportError::Budget(_) => 3,
            ReportError::Core(e) if e.is_cap_refusal() => 3,
            _ => 1,
        }
    }
}
