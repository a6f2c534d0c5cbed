use std::fmt;

use thiserror::Error;

/// Which physical-state check a matrix failed.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidationFailure {
    Hermiticity { row: usize, col: usize, deviation: f64 },
    Trace { re: f64, im: f64 },
    Positivity { min_eigenvalue: f64 },
}

impl fmt::Display for ValidationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Hermiticity { row, col, deviation } => write!(
                f,
                "hermiticity check failed at entry ({row}, {col}): |rho[{row},{col}] - conj(rho[{col},{row}])| = {deviation:e}"
            ),
            Self::Trace { re, im } => write!(f, "trace check failed: trace = {re} + {im}i"),
            Self::Positivity { min_eigenvalue } => write!(
                f,
                "positivity check failed: minimum eigenvalue = {min_eigenvalue:e}"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("mode {mode} out of range for a tensor of order {order}")]
    ModeOutOfRange { mode: usize, order: usize },
    #[error("invalid party selection: {0}")]
    InvalidParty(String),
    #[error("party {party} has dimension {dim}; a qubit is required")]
    NotQubit { party: usize, dim: usize },
    #[error("invalid state: {0}")]
    Validation(ValidationFailure),
    #[error("not a valid measurement isometry: {0}")]
    InvalidIsometry(String),
    #[error("invalid measurement basis: {0}")]
    InvalidBasis(String),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("unknown state name {0:?}")]
    UnknownState(String),
    #[error("missing Pauli labels: {0:?}")]
    MissingLabels(Vec<String>),
    #[error("Pauli expectation out of range for {label}: {value}")]
    ExpectationOutOfRange { label: String, value: f64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Self::DimensionMismatch(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
