use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("empty interval: lower end {lo} is not below upper end {hi}")]
    EmptyInterval { lo: String, hi: String },
    #[error("precision must be positive, got {0}")]
    NonPositivePrecision(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
    #[error("{0}")]
    InvalidArgument(String),
    #[error("{0} is a junction of the profile; the two one-sided derivatives may differ")]
    AtJunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;
