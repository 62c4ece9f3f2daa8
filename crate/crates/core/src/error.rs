use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("characteristic {0} is not an odd prime")]
    BadCharacteristic(u64),
    #[error("extension degree must be at least 1, got {0}")]
    BadDegree(usize),
    #[error("modulus must be monic of degree {expected}, got degree {got}")]
    BadModulus { expected: usize, got: usize },
    #[error("modulus polynomial is reducible over GF({p})")]
    ReducibleModulus { p: u64 },
    #[error("element has {got} coefficients, field expects {expected}")]
    WrongCoefficientCount { expected: usize, got: usize },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("pattern needs at least 2 generators, got {0}")]
    TooFewGenerators(usize),
    #[error("pattern is not full-rank: {0}")]
    NotFullRank(String),
    #[error("pattern has not been validated as full-rank")]
    Unvalidated,
    #[error("set is not avoiding: instance {0}")]
    NotAvoiding(String),
    #[error("evaluation budget exceeded: {needed} evaluations, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("residue condition failed: {0}")]
    ResidueCondition(String),
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
