use std::fmt;

use thiserror::Error;

/// The failure classes every operation in the crate can report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ErrorKind {
    #[error("inner lattice is not contained in the outer lattice")]
    NotSublattice,
    #[error("lattice is not of full rank")]
    RankDeficient,
    #[error("enumeration budget exceeded: {0}")]
    IndexTooLarge(String),
    #[error("polynomial is reducible over Q: {0}")]
    Reducible(String),
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("basis does not contain 1")]
    NotUnital,
    #[error("basis is not closed under multiplication: {0}")]
    NotClosed(String),
    #[error("basis is not of full rank")]
    NotFullRank,
    #[error("needs user input: {0}")]
    NeedsUserInput(String),
    #[error("order is not contained in the maximal order")]
    NotContained,
    #[error("unsupported degree {0}")]
    UnsupportedDegree(usize),
    #[error("ideals belong to different orders")]
    OrderMismatch,
    #[error("search budget exceeded: {0}")]
    SearchBudgetExceeded(String),
    #[error("independent methods disagree: {0}")]
    MethodDisagreement(String),
    #[error("class monoid factorization violated: {0}")]
    FactorizationViolation(String),
    #[error("restricted module is not free: {0}")]
    NotFreeModule(String),
    #[error("count exceeds proven bound: {0}")]
    BoundViolation(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

impl ErrorKind {
    /// Budget exhaustion is reported separately from domain failures.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            ErrorKind::IndexTooLarge(_) | ErrorKind::SearchBudgetExceeded(_)
        )
    }

    pub fn name(&self) -> &'static str {
        match self {
            ErrorKind::NotSublattice => "NotSublattice",
            ErrorKind::RankDeficient => "RankDeficient",
            ErrorKind::IndexTooLarge(_) => "IndexTooLarge",
            ErrorKind::Reducible(_) => "Reducible",
            ErrorKind::NotMonic => "NotMonic",
            ErrorKind::DegreeMismatch(_) => "DegreeMismatch",
            ErrorKind::NotUnital => "NotUnital",
            ErrorKind::NotClosed(_) => "NotClosed",
            ErrorKind::NotFullRank => "NotFullRank",
            ErrorKind::NeedsUserInput(_) => "NeedsUserInput",
            ErrorKind::NotContained => "NotContained",
            ErrorKind::UnsupportedDegree(_) => "UnsupportedDegree",
            ErrorKind::OrderMismatch => "OrderMismatch",
            ErrorKind::SearchBudgetExceeded(_) => "SearchBudgetExceeded",
            ErrorKind::MethodDisagreement(_) => "MethodDisagreement",
            ErrorKind::FactorizationViolation(_) => "FactorizationViolation",
            ErrorKind::NotFreeModule(_) => "NotFreeModule",
            ErrorKind::BoundViolation(_) => "BoundViolation",
            ErrorKind::HypothesisViolated(_) => "HypothesisViolated",
            ErrorKind::NotPrime(_) => "NotPrime",
            ErrorKind::InvalidInput(_) => "InvalidInput",
            ErrorKind::Internal(_) => "Internal",
        }
    }
}

/// An error tagged with the module and operation that raised it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Error {
    pub module: &'static str,
    pub op: &'static str,
    pub kind: ErrorKind,
}

impl Error {
    pub fn new(module: &'static str, op: &'static str, kind: ErrorKind) -> Self {
        Error { module, op, kind }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}::{}: {}", self.module, self.op, self.kind)
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.kind)
    }
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand used by the modules to build tagged errors.
pub(crate) fn err<T>(module: &'static str, op: &'static str, kind: ErrorKind) -> Result<T> {
    Err(Error::new(module, op, kind))
}
