use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("generator index {index} out of range 1..={rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("empty exponent in token `{0}`")]
    EmptyExponent(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cannot embed rank {from} into rank {to}")]
    BadEmbedding { from: usize, to: usize },
    #[error("element is the identity")]
    IdentityElement,
    #[error("word of odd length is not in the index-2 subgroup")]
    NotInEvenSubgroup,
    #[error("dimension must be odd, got {0}")]
    EvenDimension(usize),
    #[error("dimension {0} outside supported range 1..=15")]
    DimensionTooLarge(usize),
    #[error("malformed HW data: {0}")]
    MalformedHwData(String),
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("HW data failed validation: {0}")]
    InvalidHwData(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("insufficient precision: need at least {needed}, have {have}")]
    InsufficientPrecision { needed: u32, have: u32 },
    #[error("modulus {p}^{k} does not fit in 62 bits")]
    ModulusTooLarge { p: u64, k: u32 },
    #[error("matrix is not in the congruence subgroup")]
    NotInCongruenceSubgroup,
    #[error("no root of order {0} inside the congruence subgroup")]
    NoRoot(u64),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("p-adic precondition violated: {0}")]
    PadicPrecondition(String),
    #[error("certificate check failed: {0}")]
    CertificateFailed(String),
    #[error("set size precondition violated: {0}")]
    SizePrecondition(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("witness file: {0}")]
    WitnessFile(String),
    #[error("unknown group `{0}`")]
    UnknownGroup(String),
}
