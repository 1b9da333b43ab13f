use thiserror::Error;

use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Which operand of a binary operation an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operand {
    X,
    Y,
    Alpha,
    Beta,
    Weights,
}

impl std::fmt::Display for Operand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Operand::X => "x",
            Operand::Y => "y",
            Operand::Alpha => "alpha",
            Operand::Beta => "beta",
            Operand::Weights => "weights",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("sequence must have at least one period")]
    EmptySequence,

    #[error("declared horizon T={declared} but {actual} values were given")]
    LengthMismatch { declared: usize, actual: usize },

    #[error("horizon mismatch: {left} vs {right}")]
    HorizonMismatch { left: usize, right: usize },

    #[error("value at period {index} must be strictly positive")]
    NotStrictlyPositive { index: usize },

    #[error("{operand} has a negative value at period {index}")]
    Negative { operand: Operand, index: usize },

    #[error("sequence increases between periods {index} and {}", index + 1)]
    NotDecreasing { index: usize },

    #[error("parameter {name} = {value} is outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: Rational,
        range: &'static str,
    },

    #[error("explicit family has horizon {stored}, requested {requested}")]
    ExplicitHorizon { stored: usize, requested: usize },

    #[error("x does not dominate y: partial sums fail at period {index}")]
    NotDominating { index: usize },

    #[error("total sums differ: {x} vs {y}")]
    UnequalSums { x: Box<Rational>, y: Box<Rational> },

    #[error("discounted sum of {operand} under {weights} is zero")]
    ZeroDiscountedSum { operand: Operand, weights: Operand },

    #[error("period index {index} is outside 1..={horizon}")]
    IndexOutOfRange { index: usize, horizon: usize },

    #[error("deterioration needs from < to, got {from} -> {to}")]
    StepOrder { from: usize, to: usize },

    #[error("deterioration amount must be positive, got {0}")]
    NonPositiveAmount(Rational),

    #[error("deterioration amount {amount} exceeds available {available} at period {index}")]
    AmountExceedsBalance {
        index: usize,
        amount: Box<Rational>,
        available: Box<Rational>,
    },

    #[error("horizon must be at least {min}, got {actual}")]
    HorizonTooShort { min: usize, actual: usize },

    #[error("horizon must be exactly {expected}, got {actual}")]
    HorizonNotExactly { expected: usize, actual: usize },

    #[error("alpha is more patient than beta; no counterexample exists")]
    PatienceHolds,

    #[error("constructed witness failed verification: {0}")]
    WitnessVerification(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable machine-readable name used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ParseRational(_) => "parse_rational",
            Error::DivisionByZero => "division_by_zero",
            Error::EmptySequence => "empty_sequence",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::HorizonMismatch { .. } => "horizon_mismatch",
            Error::NotStrictlyPositive { .. } => "not_strictly_positive",
            Error::Negative { .. } => "negative",
            Error::NotDecreasing { .. } => "not_decreasing",
            Error::ParameterOutOfRange { .. } => "parameter_out_of_range",
            Error::ExplicitHorizon { .. } => "explicit_horizon",
            Error::NotDominating { .. } => "not_dominating",
            Error::UnequalSums { .. } => "unequal_sums",
            Error::ZeroDiscountedSum { .. } => "zero_discounted_sum",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::StepOrder { .. } => "step_order",
            Error::NonPositiveAmount(_) => "non_positive_amount",
            Error::AmountExceedsBalance { .. } => "amount_exceeds_balance",
            Error::HorizonTooShort { .. } => "horizon_too_short",
            Error::HorizonNotExactly { .. } => "horizon_not_exactly",
            Error::PatienceHolds => "patience_holds",
            Error::WitnessVerification(_) => "witness_verification",
            Error::Unsupported(_) => "unsupported",
            Error::InvalidInput(_) => "invalid_input",
        }
    }
}
