//! The ambient weighted manifold `(R^n \ {O}, |x|^{-2 gamma} delta, d_g^alpha dV_g)`.
//!
//! In the `r`-coordinate (g-distance to the singular point) the metric is the
//! cone `dr^2 + ((1 - gamma) r)^2 g_{S^{n-1}}`, so every radial computation
//! reduces to the density `w_n |1 - gamma|^{n-1} r^{n + alpha - 1} dr`.
//! Euclidean-to-Riemannian conversions use `phi = -gamma log|x|`.

use crate::error::{Error, Result};
use crate::tensor::{dot, Point, SymTensor};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Which point the g-distance is measured from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `gamma < 1`: the origin lies at finite distance.
    OriginCentered,
    /// `gamma > 1`: the point at infinity lies at finite distance.
    InfinityCentered,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ManifoldConfig {
    n: usize,
    gamma: f64,
    alpha: f64,
    mode: Mode,
}

impl ManifoldConfig {
    pub fn new(n: usize, gamma: f64, alpha: f64, mode: Mode) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidConfig(format!("dimension n = {n} < 2")));
        }
        if !gamma.is_finite() || !alpha.is_finite() {
            return Err(Error::InvalidConfig(
                "gamma and alpha must be finite".into(),
            ));
        }
        match mode {
            Mode::OriginCentered if gamma >= 1.0 => Err(Error::InvalidConfig(format!(
                "origin-centered mode needs gamma < 1, got {gamma}"
            ))),
            Mode::InfinityCentered if gamma <= 1.0 => Err(Error::InvalidConfig(format!(
                "infinity-centered mode needs gamma > 1, got {gamma}"
            ))),
            _ => Ok(Self {
                n,
                gamma,
                alpha,
                mode,
            }),
        }
    }

    /// Origin-centered configuration (`gamma < 1`).
    pub fn origin(n: usize, gamma: f64, alpha: f64) -> Result<Self> {
        Self::new(n, gamma, alpha, Mode::OriginCentered)
    }

    /// Picks the mode from the sign of `1 - gamma`.
    pub fn infer(n: usize, gamma: f64, alpha: f64) -> Result<Self> {
        let mode = if gamma > 1.0 {
            Mode::InfinityCentered
        } else {
            Mode::OriginCentered
        };
        Self::new(n, gamma, alpha, mode)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Effective weighted dimension `n + alpha`.
    pub fn weighted_dim(&self) -> f64 {
        self.n as f64 + self.alpha
    }

    /// Slope of the cone warping function, `|1 - gamma|`.
    pub fn cone_slope(&self) -> f64 {
        (1.0 - self.gamma).abs()
    }

    /// `+1` when `r` grows with `|x|`, `-1` when it shrinks.
    fn orientation(&self) -> f64 {
        match self.mode {
            Mode::OriginCentered => 1.0,
            Mode::InfinityCentered => -1.0,
        }
    }

    /// Point with the configured dimension; fails on the origin or a length mismatch.
    pub fn point(&self, coords: Vec<f64>) -> Result<Point> {
        if coords.len() != self.n {
            return Err(Error::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                self.n,
                coords.len()
            )));
        }
        Point::new(coords)
    }

    /// Euclidean norm of the points at g-distance `r`.
    pub fn euclidean_norm_at(&self, r: f64) -> f64 {
        (self.cone_slope() * r).powf(1.0 / (1.0 - self.gamma))
    }

    /// Point at g-distance `r` in the given Euclidean direction.
    pub fn point_at_distance(&self, r: f64, direction: &[f64]) -> Result<Point> {
        if direction.len() != self.n {
            return Err(Error::InvalidPoint(format!(
                "direction has {} components, expected {}",
                direction.len(),
                self.n
            )));
        }
        Point::along(direction, self.euclidean_norm_at(r))
    }

    /// Point at g-distance `r` along the diagonal `(1, ..., 1)`.
    pub fn sample_point(&self, r: f64) -> Result<Point> {
        self.point_at_distance(r, &vec![1.0; self.n])
    }

    fn check_dim(&self, x: &Point) {
        assert_eq!(
            x.dim(),
            self.n,
            "point dimension {} does not match manifold dimension {}",
            x.dim(),
            self.n
        );
    }

    fn require_origin_mode(&self, what: &str) -> Result<()> {
        match self.mode {
            Mode::OriginCentered => Ok(()),
            Mode::InfinityCentered => Err(Error::UnsupportedMode(format!(
                "{what} has no closed form around infinity; use the quadrature route"
            ))),
        }
    }

    fn require_integrable(&self) -> Result<()> {
        if self.alpha <= -(self.n as f64) {
            Err(Error::NonIntegrableWeight {
                n: self.n,
                alpha: self.alpha,
            })
        } else {
            Ok(())
        }
    }
}

/// `Gamma(k / 2)` for a positive integer `k`.
fn gamma_half_integer(k: u32) -> f64 {
    assert!(k > 0);
    if k.is_multiple_of(2) {
        (1..k / 2).map(f64::from).product()
    } else {
        // Gamma(1/2) = sqrt(pi), Gamma(x + 1) = x Gamma(x)
        let mut acc = PI.sqrt();
        let mut x = 0.5;
        while x < f64::from(k) / 2.0 - 0.25 {
            acc *= x;
            x += 1.0;
        }
        acc
    }
}

/// Surface measure `w_n` of the unit sphere `S^{n-1}`.
pub fn sphere_area(n: usize) -> f64 {
    let n = u32::try_from(n).expect("dimension fits in u32");
    2.0 * PI.powf(f64::from(n) / 2.0) / gamma_half_integer(n)
}

/// g-distance from `x` to the singular point (the origin or infinity).
pub fn geodesic_distance(cfg: &ManifoldConfig, x: &Point) -> f64 {
    x.norm().powf(1.0 - cfg.gamma) / cfg.cone_slope()
}

/// Euclidean radius `rho` with `B_R^g = {|x| < rho}` (origin) or `{|x| > rho}` (infinity).
pub fn euclidean_ball_radius(cfg: &ManifoldConfig, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {radius}"
        )));
    }
    Ok(cfg.euclidean_norm_at(radius))
}

/// Weighted volume `|B_R^g|_f = w_n (1 - gamma)^{n-1} R^{n+alpha} / (n + alpha)`.
pub fn weighted_ball_volume(cfg: &ManifoldConfig, radius: f64) -> Result<f64> {
    cfg.require_origin_mode("weighted ball volume")?;
    cfg.require_integrable()?;
    let big_n = cfg.weighted_dim();
    Ok(sphere_area(cfg.n) * cfg.cone_slope().powi(cfg.n as i32 - 1) * radius.powf(big_n) / big_n)
}

/// Weighted boundary area `|∂B_R^g|_f = w_n (1 - gamma)^{n-1} R^{n+alpha-1}`.
///
/// The sphere `r = R` has g-area `w_n ((1 - gamma) R)^{n-1}` and carries the weight `R^alpha`.
pub fn weighted_ball_perimeter(cfg: &ManifoldConfig, radius: f64) -> Result<f64> {
    cfg.require_origin_mode("weighted ball perimeter")?;
    cfg.require_integrable()?;
    Ok(sphere_area(cfg.n)
        * cfg.cone_slope().powi(cfg.n as i32 - 1)
        * radius.powf(cfg.weighted_dim() - 1.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AmbientData {
    pub metric: SymTensor,
    pub inv_metric: SymTensor,
    /// `e^{-f} = d_g^alpha`
    pub weight: f64,
    pub f: f64,
    pub euclid_grad_f: Vec<f64>,
    pub euclid_grad_phi: Vec<f64>,
}

pub fn ambient_data(cfg: &ManifoldConfig, x: &Point) -> AmbientData {
    cfg.check_dim(x);
    let norm = x.norm();
    let conformal = norm.powf(-2.0 * cfg.gamma);
    let r = geodesic_distance(cfg, x);
    let weight = r.powf(cfg.alpha);
    let f = -cfg.alpha * r.ln();
    let n2 = norm * norm;
    let grad_f_coeff = -cfg.alpha * (1.0 - cfg.gamma) / n2;
    AmbientData {
        metric: SymTensor::identity(x.clone(), conformal),
        inv_metric: SymTensor::identity(x.clone(), 1.0 / conformal),
        weight,
        f,
        euclid_grad_f: x.coords().iter().map(|c| grad_f_coeff * c).collect(),
        euclid_grad_phi: x.coords().iter().map(|c| -cfg.gamma * c / n2).collect(),
    }
}

/// Riemannian quantities of a function given its Euclidean gradient and Hessian at a point.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvertedOperators {
    /// Contravariant components of `∇u = e^{-2 phi} Du`.
    pub riem_grad: Vec<f64>,
    pub riem_hess: SymTensor,
    pub lap_g: f64,
    pub lap_f: f64,
    pub grad_norm_sq_g: f64,
}

pub fn convert_operators(
    cfg: &ManifoldConfig,
    x: &Point,
    du: &[f64],
    d2u: &SymTensor,
) -> Result<ConvertedOperators> {
    let n = cfg.n;
    if x.dim() != n || du.len() != n || d2u.dim() != n {
        return Err(Error::InvalidArgument(format!(
            "derivative data must be {n}-dimensional"
        )));
    }
    let amb = ambient_data(cfg, x);
    let inv_conformal = x.norm().powf(2.0 * cfg.gamma);
    let dphi = &amb.euclid_grad_phi;
    let du_dphi = dot(du, dphi);
    let riem_hess = SymTensor::from_fn(x.clone(), |i, j| {
        let delta = if i == j { du_dphi } else { 0.0 };
        d2u.get(i, j) - (du[i] * dphi[j] + dphi[i] * du[j]) + delta
    });
    let lap_g = inv_conformal * (d2u.trace() + (n as f64 - 2.0) * du_dphi);
    let lap_f = lap_g - inv_conformal * dot(&amb.euclid_grad_f, du);
    Ok(ConvertedOperators {
        riem_grad: du.iter().map(|d| inv_conformal * d).collect(),
        riem_hess,
        lap_g,
        lap_f,
        grad_norm_sq_g: inv_conformal * dot(du, du),
    })
}

/// Euclidean gradient and Hessian of `u(r(x))` from the radial derivatives `u'(r)`, `u''(r)`.
pub fn radial_derivatives(
    cfg: &ManifoldConfig,
    x: &Point,
    d1: f64,
    d2: f64,
) -> (Vec<f64>, SymTensor) {
    cfg.check_dim(x);
    let norm = x.norm();
    let s = cfg.orientation() * norm.powf(-cfg.gamma - 1.0);
    // Dr = s x, D^2 r = s (delta - (1 + gamma) x x^T / |x|^2)
    let dr: Vec<f64> = x.coords().iter().map(|c| s * c).collect();
    let k = (1.0 + cfg.gamma) / (norm * norm);
    let coords = x.coords();
    let hess = SymTensor::from_fn(x.clone(), |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        d2 * dr[i] * dr[j] + d1 * s * (delta - k * coords[i] * coords[j])
    });
    (dr.iter().map(|v| d1 * v).collect(), hess)
}

/// `|Y|_g^2 = g^{ik} g^{jl} Y_ij Y_kl` for the conformal metric.
pub fn metric_norm_sq(cfg: &ManifoldConfig, y: &SymTensor) -> f64 {
    y.base().norm().powf(4.0 * cfg.gamma) * y.frobenius_sq()
}
