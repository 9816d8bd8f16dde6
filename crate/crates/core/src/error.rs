use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("pole at parameter value {0}")]
    PoleAtParameter(String),
    #[error("element is not homogeneous")]
    NotHomogeneous,
    #[error("element is not monic in a")]
    NotMonicInA,
    #[error("divisor is not monic in a")]
    DivisorNotMonic,
    #[error("linear system is inconsistent at exponent index {0}")]
    Inconsistent(usize),
    #[error("expansion has no term of the top log degree")]
    NoTopLogTerm,
    #[error("system matrix is singular")]
    SingularSystem,
    #[error("no multiplicative relation between the monomials")]
    NoRelation,
    #[error("invalid germ: {0}")]
    InvalidGerm(String),
    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),
    #[error("operator has an empty kernel")]
    EmptyKernel,
    #[error("undetermined: {0}")]
    Undetermined(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("second Bernstein polynomial is undetermined")]
    UndeterminedSecondBernstein,
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("invalid case: {0}")]
    InvalidCase(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Errors caused by malformed input rather than by the computation.
    pub fn is_validation(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::InvalidGerm(_) | Error::InvalidCase(_) | Error::PoleAtParameter(_))
    }
}
