use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidModulus(u64),

    #[error("invalid degree: {0}")]
    InvalidDegree(String),

    #[error("polynomial is not monic irreducible of degree {expected}: {poly}")]
    NotIrreducible { poly: String, expected: usize },

    #[error("polynomial is not monic: {0}")]
    NotMonic(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("cannot drop matrix {0}: it is nonzero after row and column elimination")]
    NonzeroMatrixDropped(usize),

    #[error("relations and fixed space do not form a direct sum (intersection dimension {intersection}, sum misses {missing} dimensions)")]
    NotDirectSum { intersection: usize, missing: usize },

    #[error("expected a genus-2 pencil of {e}x{e} matrices, got {got}")]
    NotGenusTwo { e: usize, got: String },

    #[error("p = 2 is not supported")]
    EvenCharacteristic,

    #[error("scale guard: {what} = {value} exceeds the bound {bound}")]
    ScaleGuard { what: String, value: u128, bound: u128 },

    #[error("enumeration budget of {0} closure steps exceeded")]
    BudgetExceeded(u64),

    #[error("zero denominator in profile formula term f = {f}")]
    ZeroDenominator { f: u32 },

    #[error("profile stratification missing for {0}")]
    MissingStratification(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}
