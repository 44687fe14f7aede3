use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("field order {p}^{k} exceeds 2^16")]
    FieldTooLarge { p: u64, k: u32 },

    #[error("division by zero in GF({0})")]
    DivisionByZero(u32),

    #[error("PG({n},{q}) has {points} points, above the 2^24 desk-scale guard")]
    SpaceTooLarge { n: usize, q: u32, points: u128 },

    #[error("projective dimension must be at least 1, got {0}")]
    DimensionTooSmall(usize),

    #[error("codimension {codim} out of range 1..={n}")]
    InvalidCodim { codim: usize, n: usize },

    #[error("{kind} polar spaces need {needed} ambient dimension, got {dim}")]
    DimensionParity {
        kind: &'static str,
        needed: &'static str,
        dim: usize,
    },

    #[error("Hermitian varieties need a square field order, got {0}")]
    NotSquareOrder(u32),

    #[error("only q = 8 is supported for the Suzuki-Tits ovoid, got {0}")]
    UnsupportedOvoidOrder(u32),

    #[error("vertex and base subspaces are not skew")]
    NotSkew,

    #[error("point set belongs to a different space")]
    SpaceMismatch,

    #[error("search space too large: {0}")]
    SearchTooLarge(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("internal: {0}")]
    Internal(String),
}
