use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator index {index} outside alphabet of rank {rank}")]
    IndexOutOfAlphabet { index: i64, rank: usize },
    #[error("alphabet rank mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("ball of radius {radius} over rank {rank} has {size} elements, cap is {cap}")]
    BallTooLarge { radius: usize, rank: usize, size: u128, cap: u128 },
    #[error("coefficient domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("prime {0} divides a denominator")]
    PrimeDividesDenominator(u64),
    #[error("prime search exhausted after {0} candidates")]
    PrimeSearchExhausted(u64),
    #[error("root isolation failed: {0}")]
    RootIsolationFailed(String),
    #[error("point {point} out of range for set of size {size}")]
    PointOutOfRange { point: usize, size: usize },
    #[error("product of sizes {0} and {1} exceeds cap {2}")]
    ProductTooLarge(usize, usize, usize),
    #[error("closure exceeded cap of {0} elements")]
    ClosureTooLarge(usize),
    #[error("bad preset: {0}")]
    BadPreset(String),
    #[error("invalid F-set: {0}")]
    InvalidFSet(String),
    #[error("domain {0} is not a field usable for elimination")]
    DomainNotField(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("representation invalid; violated relators: {0:?}")]
    RepresentationInvalid(Vec<String>),
    #[error("support exploded past {0} terms")]
    SupportExplosion(usize),
    #[error("denominator vanishes at specialization point")]
    DenominatorVanishes,
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("config error at {path}: {msg}")]
    Config { path: String, msg: String },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
