use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("enumeration of {needed} elements exceeds the budget of {budget}")]
    TooLarge { needed: u128, budget: u64 },
    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),
    #[error("no element of order {order} in a field of {size} elements")]
    NoSuchRoot { order: u64, size: u128 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("characteristic 2 is not supported")]
    EvenCharacteristic,
    #[error("series has a nonzero constant term")]
    NonzeroConstantTerm,
    #[error("series constant term is not 1")]
    BadConstantTerm,
    #[error("non-integral result: {0}")]
    NonIntegralResult(String),
    #[error("no rational function with numerator degree <= {num_deg} and denominator degree <= {den_deg} matches the series")]
    NoSolution { num_deg: usize, den_deg: usize },
    #[error("division by d-1 is not exact: {0}")]
    DivisibilityViolation(String),
    #[error("precondition violated: {0}")]
    PrecondViolation(String),
    #[error("internal mismatch: {0}")]
    InternalMismatch(String),
    #[error("observed degree {observed} differs from predicted degree {predicted}")]
    DegreeMismatch { predicted: i64, observed: i64 },
    #[error("trivial factor does not divide the L-function")]
    NonDivisible,
    #[error("functional equation fails: {0}")]
    FunctionalEquationFailure(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}
