//! Error type shared by every module of the engine.

use thiserror::Error;

/// Everything that can go wrong while building or evaluating algebraic data.
///
/// Failed *checks* are not errors: they come back as verdicts with witnesses.
/// Errors are reserved for malformed input and for exhausted budgets.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variable lists differ: [{left}] vs [{right}]")]
    RingMismatch { left: String, right: String },

    #[error("no image given for variable `{0}`")]
    MissingImage(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("invalid variable name `{0}`")]
    InvalidName(String),

    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    #[error("Groebner budget exhausted after {pairs} S-pairs (limit {limit})")]
    BudgetExceeded { pairs: usize, limit: usize },

    #[error("not composable: {0}")]
    NotComposable(String),

    #[error("invalid structure: {0}")]
    Invalid(String),

    #[error("closure loop did not stabilise after {rounds} rounds (stuck on {element})")]
    ClosureCap { rounds: usize, element: String },
}

pub type Result<T> = std::result::Result<T, Error>;
