use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operands live in different variable counts")]
    ArityMismatch,
    #[error("divisor is not a unit and does not divide exactly")]
    NotDivisible,
    #[error("composition requires an inner series without constant term")]
    NonzeroConstantTerm,
    #[error("germ is not invertible (vanishing linear coefficient or nonzero constant)")]
    NotInvertible,
    #[error("jet order {have} is too small, need at least {need}")]
    OrderTooSmall { have: usize, need: usize },
    #[error("zero 1-form at working order {0}")]
    ZeroForm(usize),
    #[error("degree mismatch: expected homogeneous degree {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("linear operator is singular at degree {degree}")]
    SingularOperator { degree: usize },
    #[error("corner germ invalid: {0}")]
    InvalidCornerGerm(&'static str),
    #[error("input is not of absolutely dicritical cusp type: {0}")]
    NotCuspType(String),
    #[error("map is not of cocycle shape: {0}")]
    NotCocycleShape(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
