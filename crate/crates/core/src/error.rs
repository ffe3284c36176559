use thiserror::Error;

/// Errors raised by the geometry, curvature, solution and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid manifold configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The weight `d_g^alpha` is not integrable near the singular point.
    #[error(
        "weight exponent alpha = {alpha} is not integrable in dimension {n} (need alpha > -n)"
    )]
    NonIntegrableWeight { n: usize, alpha: f64 },

    /// A coefficient `1/(m - n)` would be evaluated at `m = n` with a non-constant weight.
    #[error("parameter m = n = {n} makes the df⊗df coefficient diverge")]
    DivergentParameter { n: usize },

    #[error("threshold formula degenerates: alpha + n - 2 = {value} <= 0")]
    DegenerateThreshold { value: f64 },

    #[error("matrix is not positive definite (pivot {pivot} = {value})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    /// Positive space-form solutions need `R < pi / (2 sqrt(k))` when `k > 0`.
    #[error("radius {radius} exceeds the positivity bound {bound} for curvature k = {k}")]
    RadiusTooLarge { k: f64, radius: f64, bound: f64 },

    #[error("operation not supported on this domain: {0}")]
    UnsupportedDomain(String),

    #[error("closed form not available in this singularity mode: {0}")]
    UnsupportedMode(String),

    /// Adaptive quadrature could not meet its tolerance; the best estimate is attached.
    #[error("adaptive quadrature exceeded max depth {max_depth} (best estimate {estimate})")]
    MaxDepthExceeded { max_depth: usize, estimate: f64 },

    #[error("profile does not vanish on the boundary: u({radius}) = {value}")]
    BoundaryNotZero { radius: f64, value: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
