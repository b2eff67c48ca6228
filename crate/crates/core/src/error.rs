use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter tuple is empty")]
    EmptyTuple,
    #[error("L1 and Lk must both be nonzero")]
    ZeroEndpoint,
    #[error("digit alphabet is empty: L1+...+Lk = {sum} < 2")]
    DegenerateAlphabet { sum: u64 },
    #[error("conjugate root {root} has modulus {modulus} <= 1 + 1e-9")]
    RootConditionViolated { root: String, modulus: f64 },
    #[error("roots are not simple: separation {separation:e} below 1e-8")]
    MultipleRoot { separation: f64 },
    #[error("ill-conditioned spectral data: residual {residual:e}")]
    IllConditioned { residual: f64 },
    #[error("index must be positive")]
    NonPositiveIndex,
    #[error("counts table does not cover level {level}")]
    LevelNotCovered { level: usize },
    #[error("invalid digit expansion: {0}")]
    InvalidExpansion(String),
    #[error("request too large: {0}")]
    TooLarge(String),
    #[error("index {n} is not a member of the elementary interval I_{x}^({m})")]
    NotMember { x: u64, m: u32, n: u64 },
    #[error("I_{x}^({m}) is not an elementary interval")]
    NotElementary { x: u64, m: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("point set is empty")]
    EmptySet,
    #[error("value {0} lies outside [0,1)")]
    OutOfRange(f64),
    #[error("invalid classical parameters: {0}")]
    InvalidClassicalParams(String),
    #[error("could not parse parameter tuple: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyTuple => "EmptyTuple",
            Error::ZeroEndpoint => "ZeroEndpoint",
            Error::DegenerateAlphabet { .. } => "DegenerateAlphabet",
            Error::RootConditionViolated { .. } => "RootConditionViolated",
            Error::MultipleRoot { .. } => "MultipleRoot",
            Error::IllConditioned { .. } => "IllConditioned",
            Error::NonPositiveIndex => "NonPositiveIndex",
            Error::LevelNotCovered { .. } => "LevelNotCovered",
            Error::InvalidExpansion(_) => "InvalidExpansion",
            Error::TooLarge(_) => "TooLarge",
            Error::NotMember { .. } => "NotMember",
            Error::NotElementary { .. } => "NotElementary",
            Error::InvalidInput(_) => "InvalidInput",
            Error::EmptySet => "EmptySet",
            Error::OutOfRange(_) => "OutOfRange",
            Error::InvalidClassicalParams(_) => "InvalidClassicalParams",
            Error::Parse(_) => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
