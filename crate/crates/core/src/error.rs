use thiserror::Error;

/// Errors produced anywhere in the pipeline.
///
/// Variants map one-to-one onto the failure modes a caller can act on; the
/// CLI turns them into exit codes (see [`Error::exit_code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at column {position}: {message}")]
    Syntax { position: usize, message: String },

    #[error("the equation is the zero polynomial")]
    ZeroPolynomial,

    #[error("operands live over different fields ({0} vs {1})")]
    FieldMismatch(String, String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("a coefficient denominator is divisible by {0}")]
    BadDenominator(u64),

    #[error("degenerate reduction: {0}")]
    DegenerateReduction(String),

    #[error("not a curve germ at the origin: {0}")]
    NotAGerm(String),

    #[error("enumeration budget exceeded: need {needed}, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("not totally rational: {0}")]
    NotTotallyRational(String),

    #[error("wild failure: {0}")]
    WildFailure(String),

    #[error("element vanishes identically on branch {branch}")]
    ZeroDivisor { branch: usize },

    #[error("delta did not stabilize under repeated doubling of the truncation")]
    NonStabilized,

    #[error("membership of {0:?} over a field with fewer elements than branches is ambiguous")]
    SmallFieldAmbiguity(Vec<u32>),

    #[error("exact division failed: {0}")]
    ExactDivisionFailure(String),

    #[error("inconsistent point counts: {0}")]
    InconsistentCounts(String),

    #[error("unit index mismatch: formula {formula}, direct {direct}")]
    IndexMismatch { formula: String, direct: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 3,
            Error::IndexMismatch { .. } | Error::ExactDivisionFailure(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
