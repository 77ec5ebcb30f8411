use thiserror::Error;

/// Errors raised across the crate.
///
/// Hypotheses that are unmet but still allow a value to be computed (for
/// example a counting bound evaluated below its certified range) are not
/// errors; those results carry a `certified` flag instead.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not a negative discriminant (need n < 0 and n = 0 or 1 mod 4)")]
    NonDiscriminant(i64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("requested precision of {prec} bits is unreachable: {reason}")]
    PrecisionUnreachable { prec: u32, reason: String },

    #[error("result is below the certified error bound: {0}")]
    PrecisionInconclusive(String),

    #[error("Newton iteration did not converge for j^-1({0})")]
    NoConvergence(String),

    #[error("value {0} lies too close to a critical value of j (0 or 1728)")]
    NearCriticalPoint(String),

    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),

    #[error("values are not the conjugates of an algebraic unit: max-formula gives {max_formula}, small-conjugate formula gives {small_formula}")]
    NotUnitConsistent { max_formula: f64, small_formula: f64 },

    #[error("xi is a corner point of the fundamental domain (zeta or zeta^2)")]
    CornerPoint,

    #[error("missing embedding data: {0}")]
    MissingEmbeddingData(String),

    #[error("singular curve: g2^3 - 27 g3^2 = 0")]
    SingularCurve,

    #[error("alpha = {0} is a singular modulus (discriminant {1})")]
    SingularModulus(String, i64),

    #[error("inequality violated: {0}")]
    ViolationFound(String),

    #[error("value out of the supported range: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
