//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by field construction, polynomial arithmetic, isogeny
/// counting, trace evaluation and spectral analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NonPrimeCharacteristic(u64),
    #[error("modulus {0} is reducible over the prime field")]
    ReducibleModulus(String),
    #[error("modulus has degree {got}, expected a monic polynomial of degree {expected}")]
    ModulusDegree { expected: u32, got: i64 },
    #[error("field of size {0} is too large for table-driven arithmetic")]
    FieldTooLarge(u64),
    #[error("operation requires odd characteristic")]
    EvenCharacteristic,
    #[error("operation requires even characteristic")]
    OddCharacteristic,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("polynomial must be nonzero")]
    ZeroPolynomial,
    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),
    #[error("polynomial {0} is not monic")]
    NotMonic(String),
    #[error("expected a monic polynomial of degree 2 in X")]
    NotDegreeTwo,
    #[error("model is inseparable; point counts are undefined")]
    InseparableModel,
    #[error("model has negative genus")]
    NegativeGenus,
    #[error("zeta numerator has non-integral coefficients; point counts are inconsistent")]
    NonIntegralZeta,
    #[error("splitting field is not imaginary")]
    NotImaginary,
    #[error("n*deg(prime) = {got} exceeds the configured cap {cap}")]
    CapExceeded { got: u32, cap: u32 },
    #[error("wrong degree: {0}")]
    WrongDegree(String),
    #[error("parameter out of range: {0}")]
    RangeViolation(String),
    #[error("dimension {d} is not below the characteristic {p}; Newton identities cannot divide by {p}")]
    DimensionAtLeastP { d: usize, p: u32 },
    #[error("need at least {needed} terms, got {got}")]
    InsufficientTerms { needed: usize, got: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("exact division failed: {0}")]
    NotDivisible(String),
    #[error("symmetry residual {residual} differs from predicted {predicted}")]
    SymmetryMismatch { residual: String, predicted: String },
    #[error("characteristic polynomial has non-integral coefficient {0}")]
    NonIntegralCharpoly(String),
    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, Error>;
