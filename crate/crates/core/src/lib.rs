//! Numerics for Serrin's overdetermined problem on the weighted conformal
//! manifold `(R^n \ {O}, |x|^{-2 gamma} delta, d_g^alpha dV_g)`.
//!
//! Radial functions are written in the g-distance `r` to the singular point.
//! The metric is then the cone `dr^2 + ((1-gamma) r)^2 g_{S^{n-1}}` and the
//! weighted measure is `w_n |1-gamma|^{n-1} r^{n+alpha-1} dr dθ`.

pub mod compat;
pub mod curvature;
pub mod error;
pub mod geometry;
pub mod linalg;
pub mod quadrature;
pub mod radial;
pub mod tensor;
pub mod verify;

pub use curvature::EffectiveDim;
pub use error::{Error, Result};
pub use geometry::{ManifoldConfig, Mode};
pub use quadrature::QuadratureSettings;
pub use radial::{DomainSpec, RadialProfile};
pub use tensor::{Point, SymTensor};
pub use verify::IdentityReport;
