use thiserror::Error;

/// Errors raised by ensemble construction, the eigensolver, the moment
/// oracles and the statistical utilities.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension {n} is not valid for {kind}: {reason}")]
    IncompatibleDimension {
        kind: &'static str,
        n: usize,
        reason: &'static str,
    },

    #[error("expected {expected} parameters, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index ({i}, {j}) outside 1..={n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("eigenvalue {index} did not converge within {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("enumeration of {required} tuples exceeds the budget of {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{skipped} of {draws} draws failed to converge")]
    TooManySkipped { skipped: usize, draws: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
