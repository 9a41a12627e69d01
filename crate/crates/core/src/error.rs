use thiserror::Error;

/// Errors raised by the workbench.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("field of size {size} exceeds the cap of {cap} elements")]
    SizeExceeded { size: u128, cap: u64 },

    #[error("no primitive polynomial of degree {degree} over F_{p}")]
    NoPrimitivePolynomial { p: u32, degree: u32 },

    #[error("supplied modulus is not a primitive polynomial of degree {degree} over F_{p}")]
    NotPrimitive { p: u32, degree: u32 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("check polynomial has degree {actual}, expected {expected}")]
    DegreeMismatch { expected: usize, actual: usize },

    #[error("enumeration needs {cost} coordinate evaluations, budget is {budget}")]
    BudgetExceeded { cost: u128, budget: u128 },

    #[error("MacWilliams transform produced a non-integer count at weight {index}")]
    NonIntegerCount { index: usize },

    #[error("gcd({g}, {p}) != 1")]
    NotCoprime { g: u64, p: u64 },

    #[error("theta is not integral in this context")]
    NonIntegralTheta,

    #[error("operation not defined for role {0}")]
    UnsupportedRole(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("sink error: {0}")]
    Sink(String),
}

pub type Result<T> = std::result::Result<T, Error>;
