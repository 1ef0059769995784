use thiserror::Error;

/// Errors raised by every fallible operation in the crate.
///
/// The variants split into contract violations (bad parameters, basis
/// mismatches, truncation limits) and numeric failures; the CLI maps the
/// former to exit code 2 and the latter to exit code 1.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("truncation: cutoff {cutoff} is too small (tail mass {tail_mass:.3e}, limit {limit:.1e})")]
    Truncation {
        tail_mass: f64,
        limit: f64,
        cutoff: usize,
    },
    #[error("unsupported scale: {0}")]
    UnsupportedScale(String),
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),
    #[error("not normalizable: {0}")]
    NotNormalizable(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParameter(String),
    #[error("invalid scale: {0}")]
    InvalidScale(String),
    #[error("invalid observable: {0}")]
    InvalidObservable(String),
    #[error("singular profile: {0}")]
    SingularProfile(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("step-size failure: {0}")]
    StepSize(String),
}

impl Error {
    /// Whether the error is a contract violation rather than a numeric failure.
    pub fn is_contract_violation(&self) -> bool {
        !matches!(self, Error::Numeric(_) | Error::StepSize(_))
    }

    /// Short machine-readable tag used in error JSON.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Truncation { .. } => "truncation",
            Error::UnsupportedScale(_) => "unsupported-scale",
            Error::BasisMismatch(_) => "basis-mismatch",
            Error::NotNormalizable(_) => "not-normalizable",
            Error::DegenerateParameter(_) => "degenerate-parameter",
            Error::InvalidScale(_) => "invalid-scale",
            Error::InvalidObservable(_) => "invalid-observable",
            Error::SingularProfile(_) => "singular-profile",
            Error::Numeric(_) => "numeric",
            Error::StepSize(_) => "step-size",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
