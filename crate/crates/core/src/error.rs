use thiserror::Error;

/// Errors raised by the measurement and bound machinery.
#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed matrix: {0}")]
    Shape(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max |M - M†| entry = {0:e})")]
    NotHermitian(f64),

    #[error("{what} is not positive (eigenvalue {eigenvalue:e})")]
    NotPositive { eigenvalue: f64, what: String },

    #[error("invalid POVM: {}", .0.join("; "))]
    InvalidPovm(Vec<String>),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid instrument: {0}")]
    InvalidInstrument(String),

    #[error("invalid measuring process: {0}")]
    InvalidProcess(String),

    #[error("outcome {outcome} out of range (instrument has {count} outcomes)")]
    OutcomeOutOfRange { outcome: usize, count: usize },

    #[error("parameter {name} = {value} outside {range}")]
    ParameterRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("value {0} outside [0, 1]")]
    ProbabilityRange(f64),

    #[error("closed form and generic pipeline disagree on {quantity} at {parameter} = {at}: deviation {deviation:e}")]
    CrossCheck {
        quantity: &'static str,
        parameter: &'static str,
        at: f64,
        deviation: f64,
    },

    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by operands of incompatible dimensions.
    pub fn is_dimension_mismatch(&self) -> bool {
        matches!(self, Error::DimensionMismatch { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
