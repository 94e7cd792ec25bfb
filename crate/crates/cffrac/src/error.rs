//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors produced by grid construction, operator evaluation, transforms,
/// quadrature and the variational solver.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("grid needs at least {need} points, got {got}")]
    DomainTooSmall { need: usize, got: usize },

    #[error("point {t} lies outside the grid [{lo}, {hi}]")]
    OutOfDomain { t: i64, lo: i64, hi: i64 },

    #[error("invalid grid: left endpoint {a} exceeds right endpoint {b}")]
    InvalidDomain { a: i64, b: i64 },

    #[error("grid [{lo}, {hi}] needs {expected} values, got {got}")]
    LengthMismatch { lo: i64, hi: i64, expected: usize, got: usize },

    #[error("fractional order must lie in [0, 1], got {0}")]
    OrderOutOfRange(String),

    #[error("{context} requires an order strictly inside (0, 1), got {alpha}")]
    OrderNotStrictlyFractional { alpha: String, context: &'static str },

    #[error("kernel rate -a/(1-a) is undefined at order 1")]
    KernelRateUndefined,

    #[error("nabla exponential is undefined at rate 1")]
    NablaExpUndefined,

    #[error("delta exponential is undefined at rate -1")]
    DeltaExpUndefined,

    #[error("exponential kernel exponent must be nonnegative, got {0}")]
    NegativeKernelExponent(i64),

    #[error("zero cannot be raised to the negative power {0}")]
    ZeroToNegativePower(i64),

    #[error("normalization constant must be nonzero")]
    ZeroNormalization,

    #[error("the Caputo-Riemann correction divides by 1-alpha and is undefined at order 1")]
    GapUndefinedAtOrderOne,

    #[error("functions live on different grids: [{a1}, {b1}] vs [{a2}, {b2}]")]
    GridMismatch { a1: i64, b1: i64, a2: i64, b2: i64 },

    #[error("signal bases differ: {left} vs {right}")]
    BaseMismatch { left: i64, right: i64 },

    #[error("operation requires a finite-support signal")]
    NotFiniteSupport,

    #[error("geometric signal requires a nonzero ratio")]
    ZeroGeometricRatio,

    #[error("base {base} is not admissible for a function on [{lo}, {hi}]")]
    InvalidBase { base: i64, lo: i64, hi: i64 },

    #[error("transform diverges: {0}")]
    TransformDiverges(String),

    #[error("invalid interval: [{a}, {b}]")]
    InvalidInterval { a: f64, b: f64 },

    #[error("quadrature did not converge within {max_subdivisions} subdivisions")]
    QuadratureDidNotConverge { max_subdivisions: u32 },

    #[error("lagrangian partial derivative unavailable: {0}")]
    MissingPartial(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
