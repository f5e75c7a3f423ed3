use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator list is empty")]
    EmptyGenerators,
    #[error("generator {0} is not positive")]
    NonPositiveGenerator(String),
    #[error("denominator must be positive")]
    ZeroDenominator,
    #[error("semigroup has gcd {0}; query needs a cofinite semigroup")]
    NonCofinite(String),
    #[error("membership table would exceed {limit} entries")]
    TableTooLarge { limit: u64 },

    #[error("matrix has no entries")]
    EmptyMatrix,
    #[error("matrix rows have unequal lengths")]
    RaggedRows,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("entries {0} are not coprime")]
    NotCoprime(String),
    #[error("matrix is rank deficient (rank {rank}, need {needed})")]
    RankDeficient { rank: usize, needed: usize },

    #[error("generator column {0} is zero")]
    ZeroGenerator(usize),
    #[error("cone is not pointed")]
    NotPointed,
    #[error("cone is not full dimensional")]
    NotFullDimensional,
    #[error("projection is negative on generator column {0}")]
    NegativeProjection(usize),
    #[error("slice is unbounded: generator column {0} has zero first coordinate")]
    UnboundedSlice(usize),
    #[error("first row entry {0} is not positive")]
    NonPositiveFirstRow(usize),
    #[error("semigroup image is trivial")]
    TrivialImage,

    #[error("semigroup {0} is not cofinite")]
    SemigroupNotCofinite(String),
    #[error("no stable r found up to {max_r}")]
    StableRNotFound { max_r: u64 },
    #[error("sampling budget exhausted after {attempts} attempts")]
    BudgetExhausted { attempts: u64 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("trace rejected ({code}): {detail}")]
    TraceRejected { code: &'static str, detail: String },
}

impl Error {
    /// Stable machine-readable code used by the CLI error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyGenerators => "empty-generators",
            Error::NonPositiveGenerator(_) => "nonpositive-generator",
            Error::ZeroDenominator => "zero-denominator",
            Error::NonCofinite(_) => "non-cofinite",
            Error::TableTooLarge { .. } => "table-too-large",
            Error::EmptyMatrix => "empty-matrix",
            Error::RaggedRows => "ragged-rows",
            Error::DimensionMismatch { .. } => "dimension-mismatch",
            Error::NotSquare { .. } => "not-square",
            Error::NotCoprime(_) => "not-coprime",
            Error::RankDeficient { .. } => "rank-deficient",
            Error::ZeroGenerator(_) => "zero-generator",
            Error::NotPointed => "not-pointed",
            Error::NotFullDimensional => "not-full-dimensional",
            Error::NegativeProjection(_) => "negative-projection",
            Error::UnboundedSlice(_) => "unbounded-slice",
            Error::NonPositiveFirstRow(_) => "nonpositive-first-row",
            Error::TrivialImage => "trivial-image",
            Error::SemigroupNotCofinite(_) => "non-cofinite",
            Error::StableRNotFound { .. } => "stable-r-not-found",
            Error::BudgetExhausted { .. } => "budget-exhausted",
            Error::VerificationFailed(_) => "verification-failed",
            Error::Precondition(_) => "precondition",
            Error::Parse(_) => "malformed-input",
            Error::TraceRejected { code, .. } => code,
        }
    }
}
