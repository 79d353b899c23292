use thiserror::Error;

/// Failures surfaced by the library. The CLI maps each variant onto a
/// distinct exit code.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("not strongly connected: {0}")]
    NotStronglyConnected(String),
    #[error("not a finite-index sublattice of A_n: {0}")]
    NotFiniteIndex(String),
    #[error("non-generic result: {0}")]
    NonGeneric(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("matrix is singular")]
    Singular,
    #[error("vector is not a member of the lattice")]
    NotMember,
    #[error("value does not fit in a machine integer: {0}")]
    Overflow(String),
    #[error("deformation template mismatch at level {level}, step {step}: {detail}")]
    TemplateMismatch {
        level: usize,
        step: usize,
        detail: String,
    },
    #[error("not a resolution: {0}")]
    NotAResolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Short machine-readable tag used in JSON error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotStronglyConnected(_) => "NotStronglyConnected",
            Error::NotFiniteIndex(_) => "NotFiniteIndex",
            Error::NonGeneric(_) => "NonGenericResult",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Singular => "Singular",
            Error::NotMember => "NotMember",
            Error::Overflow(_) => "Overflow",
            Error::TemplateMismatch { .. } => "TemplateMismatch",
            Error::NotAResolution(_) => "NotAResolution",
        }
    }

    /// Process exit code for the CLI. 2 is reserved for malformed input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidInput(_) => 2,
            Error::NotStronglyConnected(_) => 3,
            Error::NotFiniteIndex(_) => 4,
            Error::NonGeneric(_) => 5,
            Error::TemplateMismatch { .. } => 6,
            Error::NotAResolution(_) => 7,
            Error::Singular | Error::NotMember | Error::Overflow(_) => 1,
        }
    }
}
