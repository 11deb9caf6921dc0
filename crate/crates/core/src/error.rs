use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} variables, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation is undefined on the unit ideal")]
    UnitIdeal,

    #[error("ideal is not zero-dimensional: variable x{0} has no pure power among the generators")]
    NotZeroDimensional(usize),

    #[error("enumeration guard exceeded: {needed} lattice points requested, guard is {guard}")]
    GuardExceeded { needed: u128, guard: u64 },

    #[error("expected an ideal in {expected} variables, got {found}")]
    WrongArity { expected: usize, found: usize },

    #[error("rank {index} out of range for {count} monomials")]
    IndexOutOfRange { index: String, count: String },

    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("invariant violated: {0}")]
    InvariantViolation(String),

    #[error("census is truncated; explicit pairs are required for {0}")]
    CensusTruncated(&'static str),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn is_guard(&self) -> bool {
        matches!(self, Error::GuardExceeded { .. })
    }

    pub fn is_assertion(&self) -> bool {
        matches!(self, Error::InvariantViolation(_))
    }
}
