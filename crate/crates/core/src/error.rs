use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FloerError {
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("differential entry references unknown generator `{0}`")]
    DanglingEndpoint(String),

    #[error("invalid generator name `{0}`")]
    InvalidName(String),

    #[error("complex failed validation: {0}")]
    Invalid(String),

    #[error("homology over F[U,U^-1] has rank {0}, expected 1 (not a knot in a homology sphere)")]
    NotRankOne(usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("window {window} too small: arrow from {from} reaches an excluded translate inside the region")]
    WindowTooSmall { window: i64, from: String },

    #[error("epsilon trichotomy violated: tau={tau}, nu={nu}, nu'={nu_prime}")]
    Trichotomy { tau: i64, nu: i64, nu_prime: i64 },

    #[error("flip map check failed: {0}")]
    Flip(String),

    #[error("no flip map found: {0}")]
    NoFlip(String),

    #[error("grading calibration failed for n={n}: truncations disagree ({a} vs {b})")]
    Calibration { n: i64, a: i64, b: i64 },

    #[error("invalid plumbing graph: {0}")]
    Graph(String),

    #[error("intersection form is not definite")]
    Indefinite,

    #[error("lattice enumeration exceeded the node limit of {0}")]
    NodeLimit(u64),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("{0}")]
    Other(String),
}

pub type Result<T> = std::result::Result<T, FloerError>;
