use thiserror::Error;

/// Errors surfaced by the library. Each variant maps to a stable CLI exit
/// code; see [`Error::exit_code`].
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("ring mismatch: operands belong to different rings")]
    RingMismatch,
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("element is not in I_R (first Witt coordinate is nonzero)")]
    NotInIR,
    #[error("unsupported ring: {0}")]
    UnsupportedRing(String),
    #[error("degree violation at block ({row},{col}): expected degree {expected}, found {found}")]
    DegreeViolation {
        row: usize,
        col: usize,
        expected: i64,
        found: i64,
    },
    #[error("map is not bijective: {0}")]
    NotBijective(String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("cocharacter is not minuscule: {0:?}")]
    NotMinuscule(Vec<i64>),
    #[error("element is not in the double coset: elementary divisors {found:?}, expected {expected:?}")]
    NotInDoubleCoset { found: Vec<i64>, expected: Vec<i64> },
    #[error("invalid Zink display: {0}")]
    InvalidZink(String),
    #[error("action matrix split failure: {0}")]
    SplitFailure(String),
    #[error("base ring is not local")]
    NonLocalRing,
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    /// Exit-code contract of the `wittkit` binary: usage errors are mapped
    /// to 2 by the CLI layer itself; library errors split into precision
    /// (3), size caps (4) and math-domain errors (5).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted(_) | Error::InsufficientPrecision(_) => 3,
            Error::SizeCap(_) => 4,
            _ => 5,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
