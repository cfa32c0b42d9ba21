use thiserror::Error;

/// Errors raised by the algebra kernels, the curve model and the certificate layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("polynomial degree {found} is below the required minimum {required}")]
    DegreeTooSmall { found: usize, required: usize },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("prime {0} exceeds the supported 64-bit range")]
    PrimeOutOfRange(String),
    #[error("value is not integral at {p}")]
    NotIntegral { p: u64 },
    #[error("leading coefficient vanishes modulo {p}")]
    LeadingCoefficientVanishes { p: u64 },
    #[error("zero input where a nonzero value is required")]
    ZeroInput,
    #[error("zero divisor encountered: the relation for `{generator}` is reducible")]
    ZeroDivisor { generator: String },
    #[error("exact inversion is only supported in towers with at most one generator (got {0})")]
    UnsupportedTower(usize),
    #[error("tower mismatch: {0}")]
    TowerMismatch(String),
    #[error("invalid tower: {0}")]
    InvalidTower(String),
    #[error("prime {p} divides the discriminant of relation `{generator}`")]
    Ramified { p: u64, generator: String },
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("curve does not have good reduction at {0}")]
    BadReduction(u64),
    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),
    #[error("unsupported model: {0}")]
    UnsupportedModel(String),
    #[error("coefficient height exceeds the ceiling of {ceiling_digits} decimal digits")]
    HeightCeilingExceeded { ceiling_digits: u64 },
    #[error("order search exceeded the Hasse-Weil bound {0}")]
    OrderBoundExceeded(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid document: {0}")]
    InvalidDocument(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
