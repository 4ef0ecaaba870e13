use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Inputs do not satisfy an operation's preconditions (mesh or stagger
    /// mismatch, inconsistent operator chains, malformed schemes).
    #[error("contract violation: {0}")]
    ContractViolation(String),
    /// A value lies outside the mathematical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),
    /// The time stepper produced a non-finite value.
    #[error("instability: non-finite field values at step {step}")]
    Instability { step: usize },
}

impl Error {
    pub(crate) fn contract(msg: impl Into<String>) -> Self {
        Error::ContractViolation(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
