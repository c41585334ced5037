use thiserror::Error;

/// Errors surfaced by the modelling pipeline.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("optimizer did not converge after {iterations} iterations (simplex spread {spread:.3e})")]
    NonConvergence { iterations: usize, spread: f64 },

    #[error("root bracket could not be established: {0}")]
    BracketFailure(String),

    #[error("covariate sample is degenerate (zero variance or fewer than two points)")]
    DegenerateSample,

    #[error("at least {needed} events are required, got {got}")]
    TooFewEvents { needed: usize, got: usize },

    #[error("conditioning value {0} has zero density under every covariate or effect value")]
    UnsupportedConditioningValue(f64),

    #[error("initial value for `{0}` lies outside its prior support")]
    PriorMismatch(String),

    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

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
