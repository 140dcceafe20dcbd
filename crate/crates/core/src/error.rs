use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("degenerate model: the discriminant vanishes identically")]
    Degenerate,
    #[error("wrong characteristic: {0}")]
    WrongCharacteristic(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("result is not integral: {0}")]
    NotIntegral(String),
    #[error("bad prime {p}: {reason}")]
    BadPrime { p: u32, reason: String },
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("the minimal model has constant coefficients")]
    ConstantModel,
    #[error("isotrivial surface (constant j-invariant)")]
    Isotrivial,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search budget exceeded: {needed} candidates, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
