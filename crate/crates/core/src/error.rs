use thiserror::Error;

/// Errors produced by the arrangement toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("arrangement is not semigeneral: {0}")]
    NotSemigeneral(crate::geometry::SemigeneralWitness),

    #[error("arrangement is semigeneral; no obstruction report is produced")]
    SemigeneralInput,

    #[error("polynomial is not divisible by the given divisor")]
    NotDivisible,

    #[error("pivot at position {pivot} does not divide entry in column {column}")]
    PivotDivisionFailure { pivot: usize, column: usize },

    #[error("region ordering search found no valid continuation")]
    OrderingStuck,

    #[error("closed form violated at step {step}: {detail}")]
    ClosedFormViolation { step: usize, detail: String },

    #[error("size cap exceeded: {0}")]
    TooLarge(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the command line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) | Error::InvalidArrangement(_) | Error::Io(_) | Error::Json(_) => 2,
            Error::Unsupported(_)
            | Error::NotSemigeneral(_)
            | Error::SemigeneralInput
            | Error::NotDivisible
            | Error::PivotDivisionFailure { .. } => 3,
            Error::TooLarge(_) => 4,
            // internal consistency failures
            Error::OrderingStuck | Error::ClosedFormViolation { .. } => 1,
        }
    }
}
