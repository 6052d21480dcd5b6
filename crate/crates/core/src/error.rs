use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
    #[error("cannot promote conductor {from} to {to}: {from} does not divide {to}")]
    BadPromotion { from: u64, to: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("prime {p} ramifies in Q(zeta_{conductor})")]
    RamifiedPrime { p: u64, conductor: u64 },
    #[error("prime {0} is in the declared exclusion set")]
    ExcludedPrime(u64),
    #[error("horizon {horizon} too small: need at least {needed}")]
    InsufficientHorizon { horizon: u64, needed: u64 },
    #[error("truncation {truncation} too small: need at least {needed}")]
    InsufficientTruncation { truncation: usize, needed: usize },
    #[error("series must have zero constant term")]
    NonzeroConstantTerm,
    #[error("series must have constant term 1")]
    NonunitConstantTerm,
    #[error("denominator vanishes at z = 0")]
    PoleAtOrigin,
    #[error("polynomial has a repeated factor")]
    NotSquarefree,
    #[error("precision {precision} too small: need more than {needed}")]
    InsufficientPrecision { precision: u32, needed: u32 },
    #[error("{x} is not a unit modulo {p}")]
    NotAUnit { x: String, p: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("line {line}: {msg}")]
    Csv { line: usize, msg: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("internal consistency check failed: {0}")]
    Soundness(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
