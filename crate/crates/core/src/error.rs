use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("size bound exceeded: {0}")]
    SizeBound(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("operands live over different curves")]
    CurveMismatch,
    #[error("zero input: {0}")]
    ZeroInput(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element is not integral at {0}")]
    NotIntegral(String),
    #[error("{0}")]
    Singular(String),
    #[error("degenerate form: {0}")]
    Degenerate(String),
    #[error("form is not unimodular: {0}")]
    NotUnimodular(String),
    #[error("malformed genus witness: {0}")]
    MalformedWitness(String),
    #[error("search budget exceeded: estimated {estimated} evaluations, cap {cap}")]
    BudgetExceeded { estimated: u128, cap: u128 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
