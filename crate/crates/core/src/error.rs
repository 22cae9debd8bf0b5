use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("integer overflow")]
    Overflow,

    #[error("expected coprime {p} > {q} >= 1")]
    InvalidFraction { p: i64, q: i64 },

    #[error("zero vector has no orthogonal complement")]
    ZeroVector,

    #[error("basis vectors are linearly dependent")]
    DependentBasis,

    #[error("rank mismatch: basis has {rank} vectors, linear lattice has {expected} weights")]
    RankMismatch { rank: usize, expected: usize },

    #[error("weights must all be >= 2, got {0:?}")]
    InvalidWeights(Vec<i64>),

    #[error("tuple must be non-decreasing and non-negative: {0:?}")]
    NotSortedNonNegative(Vec<i64>),

    #[error("not a changemaker: {0:?}")]
    NotChangemaker(Vec<i64>),

    #[error("{what} = {value} out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("polynomial is not of L-space form")]
    NotLSpaceForm,

    #[error("non-integral genus: 2g-1 = {0}")]
    Parity(i64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub(crate) fn overflow<T>(v: Option<T>) -> Result<T> {
    v.ok_or(Error::Overflow)
}
