use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,

    #[error("polynomial degree {0} exceeds the supported maximum of {max}", max = crate::polynomial::MAX_DEGREE)]
    UnsupportedDegree(usize),

    #[error("invalid quantizer: {0}")]
    InvalidQuantizer(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("position {position} has odd transition count {count}")]
    OddTransitionCount { position: usize, count: usize },

    #[error("input must be strictly increasing")]
    UnsortedInput,

    #[error("thresholds must be strictly increasing")]
    UnsortedThresholds,

    #[error("infeasible transition spec: {0}")]
    InfeasibleSpec(String),

    #[error("search space too large: {0}")]
    TooLarge(String),

    #[error("no input point satisfies the power budget")]
    NoFeasibleInput,

    #[error("channel matrix is not stochastic: {0}")]
    NonStochasticMatrix(String),

    #[error("threshold search space is empty")]
    EmptySearchSpace,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("golden mismatch: {0}")]
    GoldenMismatch(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit status: 2 for I/O and parse failures, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) | Error::Json(_) | Error::Csv(_) | Error::Parse(_) => 2,
            _ => 1,
        }
    }
}
