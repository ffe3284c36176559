//! Ricci, weight-Hessian and Bakry-Émery tensors of the weighted conformal
//! manifold, and the curvature predicates that gate rigidity.
//!
//! All tensors are returned as Euclidean components of (0,2)-tensors. Every
//! one of them has the shape `(a delta + b x̂ x̂) / |x|^2`.

use crate::error::{Error, Result};
use crate::geometry::{ManifoldConfig, Mode};
use crate::tensor::{dot, Point, SymTensor};
use serde::{Serialize, Serializer};

/// The Bakry-Émery parameter `m`, with infinity kept exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveDim {
    Finite(f64),
    Infinite,
}

impl EffectiveDim {
    /// Coefficient `1 / (m - n)` of `df ⊗ df`, exactly zero for `m = ∞`.
    fn drift_coefficient(self, n: usize) -> Option<f64> {
        match self {
            EffectiveDim::Infinite => Some(0.0),
            EffectiveDim::Finite(m) if m == n as f64 => None,
            EffectiveDim::Finite(m) => Some(1.0 / (m - n as f64)),
        }
    }
}

impl std::fmt::Display for EffectiveDim {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EffectiveDim::Finite(m) => write!(f, "{m}"),
            EffectiveDim::Infinite => f.write_str("inf"),
        }
    }
}

impl std::str::FromStr for EffectiveDim {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(EffectiveDim::Infinite),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|m| m.is_finite())
                .map(EffectiveDim::Finite)
                .ok_or_else(|| format!("expected a finite number or 'inf', got {s:?}")),
        }
    }
}

impl Serialize for EffectiveDim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            EffectiveDim::Finite(m) => s.serialize_f64(*m),
            EffectiveDim::Infinite => s.serialize_str("inf"),
        }
    }
}

fn radial_shape(x: &Point, iso: f64, radial: f64) -> SymTensor {
    let r2 = x.norm() * x.norm();
    SymTensor::identity_plus_outer(x.clone(), iso / r2, radial / r2, &x.unit())
}

/// Ricci tensor of `|x|^{-2 gamma} delta`: `-(n-2) gamma (gamma-2) / |x|^2 (delta - x̂ x̂)`.
pub fn ricci_at(cfg: &ManifoldConfig, x: &Point) -> SymTensor {
    let k = -(cfg.n() as f64 - 2.0) * cfg.gamma() * (cfg.gamma() - 2.0);
    let ric = radial_shape(x, k, -k);
    debug_assert!(ric.max_abs_diff(&ricci_general_at(cfg, x)) <= 1e-12 * (1.0 + ric.max_abs()));
    ric
}

/// Ricci tensor from the general conformal-change formula for `g = e^{2 phi} delta`,
/// `-(n-2)(D^2 phi - dphi ⊗ dphi) - (Δphi + (n-2)|Dphi|^2) delta`, with `phi = -gamma log|x|`.
pub fn ricci_general_at(cfg: &ManifoldConfig, x: &Point) -> SymTensor {
    let n = cfg.n() as f64;
    let gamma = cfg.gamma();
    let r2 = x.norm() * x.norm();
    let c = x.coords();
    let dphi: Vec<f64> = c.iter().map(|v| -gamma * v / r2).collect();
    let hess_phi = SymTensor::from_fn(x.clone(), |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        -gamma * (delta - 2.0 * c[i] * c[j] / r2) / r2
    });
    let lap_phi = hess_phi.trace();
    let grad_sq = dot(&dphi, &dphi);
    let iso = -(lap_phi + (n - 2.0) * grad_sq);
    SymTensor::from_fn(x.clone(), |i, j| {
        let delta = if i == j { iso } else { 0.0 };
        -(n - 2.0) * (hess_phi.get(i, j) - dphi[i] * dphi[j]) + delta
    })
}

/// Riemannian Hessian of `f`: `-alpha (1-gamma)^2 / |x|^2 (delta - 2 x̂ x̂)`.
pub fn hessian_f_at(cfg: &ManifoldConfig, x: &Point) -> SymTensor {
    let k = -cfg.alpha() * (1.0 - cfg.gamma()).powi(2);
    radial_shape(x, k, -2.0 * k)
}

/// `df ⊗ df = alpha^2 (1-gamma)^2 / |x|^4 x ⊗ x`.
pub fn df_tensor_df_at(cfg: &ManifoldConfig, x: &Point) -> SymTensor {
    let k = (cfg.alpha() * (1.0 - cfg.gamma())).powi(2);
    radial_shape(x, 0.0, k)
}

/// `Ric_f^m = Ric + ∇²f - df ⊗ df / (m - n)`.
///
/// `m = n` is accepted only when the weight is constant.
pub fn bakry_emery_at(cfg: &ManifoldConfig, m: EffectiveDim, x: &Point) -> Result<SymTensor> {
    let base = ricci_at(cfg, x).add_scaled(&hessian_f_at(cfg, x), 1.0);
    match m.drift_coefficient(cfg.n()) {
        Some(coeff) => Ok(base.add_scaled(&df_tensor_df_at(cfg, x), -coeff)),
        None if cfg.alpha() == 0.0 => Ok(base),
        None => Err(Error::DivergentParameter { n: cfg.n() }),
    }
}

/// Flat-space criterion `Ric_f^m >= 0` for the weight `|x|^alpha`:
/// `alpha = 0`, or `alpha < 0` and `n + alpha <= m <= n`.
pub fn power_weight_condition(n: usize, alpha: f64, m: EffectiveDim) -> bool {
    if alpha == 0.0 {
        return true;
    }
    let n = n as f64;
    match m {
        EffectiveDim::Infinite => false,
        EffectiveDim::Finite(m) => alpha < 0.0 && n + alpha <= m && m <= n,
    }
}

/// `(n-2) gamma (gamma-2) + alpha (1-gamma)^2`; non-positive exactly on `[gamma1, gamma2]`.
pub fn condition_value(n: usize, alpha: f64, gamma: f64) -> f64 {
    (n as f64 - 2.0) * gamma * (gamma - 2.0) + alpha * (1.0 - gamma).powi(2)
}

/// `Ric + ∇²f - df ⊗ df / alpha`, the Bakry-Émery tensor at `m = n + alpha`.
pub fn compatibility_tensor_at(cfg: &ManifoldConfig, x: &Point) -> Result<SymTensor> {
    if cfg.alpha() == 0.0 {
        return Err(Error::DivergentParameter { n: cfg.n() });
    }
    let k = -condition_value(cfg.n(), cfg.alpha(), cfg.gamma());
    let t = radial_shape(x, k, -k);
    debug_assert!({
        let sum = ricci_at(cfg, x)
            .add_scaled(&hessian_f_at(cfg, x), 1.0)
            .add_scaled(&df_tensor_df_at(cfg, x), -1.0 / cfg.alpha());
        let scale = 1.0 + sum.max_abs();
        t.max_abs_diff(&sum) <= 1e-12 * scale
    });
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdmissibilityResult {
    pub gamma1: f64,
    pub gamma2: f64,
    pub condition_value: f64,
    pub admissible: bool,
    /// Mode selected by `gamma`; `None` at the excluded value `gamma = 1`.
    pub mode: Option<Mode>,
}

/// Evaluates the rigidity gate `alpha > 0` and `gamma1 <= gamma < 1` (origin)
/// or `1 < gamma < gamma2` (infinity).
///
/// The boundary is decided on the closed-form thresholds, not on the sign of
/// `condition_value`, which is rounding noise at `gamma = gamma1`.
pub fn admissibility(n: usize, alpha: f64, gamma: f64) -> Result<AdmissibilityResult> {
    let denom = alpha + n as f64 - 2.0;
    if !(denom > 0.0) {
        return Err(Error::DegenerateThreshold { value: denom });
    }
    let spread = ((n as f64 - 2.0) / denom).sqrt();
    let gamma1 = 1.0 - spread;
    let gamma2 = 1.0 + spread;
    let mode = if gamma < 1.0 {
        Some(Mode::OriginCentered)
    } else if gamma > 1.0 {
        Some(Mode::InfinityCentered)
    } else {
        None
    };
    let in_range = match mode {
        Some(Mode::OriginCentered) => gamma1 <= gamma,
        Some(Mode::InfinityCentered) => gamma < gamma2,
        None => false,
    };
    Ok(AdmissibilityResult {
        gamma1,
        gamma2,
        condition_value: condition_value(n, alpha, gamma),
        admissible: alpha > 0.0 && in_range,
        mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::ambient_data;
    use crate::geometry::{convert_operators, ManifoldConfig};
    use crate::linalg::min_generalized_eigenvalue;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn diag(x: &Point, d: &[f64]) -> SymTensor {
        SymTensor::from_fn(x.clone(), |i, j| if i == j { d[i] } else { 0.0 })
    }

    fn close(a: &SymTensor, b: &SymTensor, tol: f64) -> bool {
        a.max_abs_diff(b) <= tol
    }

    #[test]
    fn ricci_examples() {
        let x = pt(&[1.0, 0.0, 0.0]);
        let flat = ManifoldConfig::origin(3, 0.0, 1.0).unwrap();
        assert_eq!(ricci_at(&flat, &x).max_abs(), 0.0);
        let cfg = ManifoldConfig::origin(3, 0.5, 0.0).unwrap();
        assert!(close(
            &ricci_at(&cfg, &x),
            &diag(&x, &[0.0, 0.75, 0.75]),
            1e-15
        ));
        let plane = ManifoldConfig::origin(2, -0.8, 0.0).unwrap();
        assert_eq!(ricci_at(&plane, &pt(&[0.3, 0.4])).max_abs(), 0.0);
    }

    #[test]
    fn ricci_is_homogeneous_of_degree_minus_two() {
        let cfg = ManifoldConfig::origin(4, 0.3, 1.0).unwrap();
        let x = pt(&[0.2, -0.7, 1.1, 0.4]);
        let twice = x.scaled(2.0).unwrap();
        let a = ricci_at(&cfg, &twice);
        let b = ricci_at(&cfg, &x).scaled(0.25);
        assert!(close(&a, &b, 1e-13));
    }

    #[test]
    fn hessian_and_drift_examples() {
        let x = pt(&[1.0, 0.0, 0.0]);
        let flat = ManifoldConfig::origin(3, 0.3, 0.0).unwrap();
        assert_eq!(hessian_f_at(&flat, &x).max_abs(), 0.0);
        assert_eq!(df_tensor_df_at(&flat, &x).max_abs(), 0.0);

        let cfg = ManifoldConfig::origin(3, 0.0, -1.0).unwrap();
        assert!(close(
            &hessian_f_at(&cfg, &x),
            &diag(&x, &[-1.0, 1.0, 1.0]),
            1e-15
        ));

        let y = pt(&[0.0, 2.0, 0.0]);
        let cfg = ManifoldConfig::origin(3, 0.5, 2.0).unwrap();
        assert!(close(
            &df_tensor_df_at(&cfg, &y),
            &diag(&y, &[0.0, 0.25, 0.0]),
            1e-15
        ));
    }

    #[test]
    fn hessian_f_matches_conformal_conversion() {
        // f = -alpha (1-gamma) log|x| + const, fed through the Euclidean-to-Riemannian formulas
        for cfg in [
            ManifoldConfig::origin(3, 0.5, 1.0).unwrap(),
            ManifoldConfig::origin(5, -1.0, 2.5).unwrap(),
            ManifoldConfig::infer(4, 1.4, 0.7).unwrap(),
        ] {
            let x = cfg.point(vec![0.3; cfg.n()]).unwrap();
            let a = -cfg.alpha() * (1.0 - cfg.gamma());
            let r2 = x.norm() * x.norm();
            let c = x.coords();
            let df: Vec<f64> = c.iter().map(|v| a * v / r2).collect();
            let d2f = SymTensor::from_fn(x.clone(), |i, j| {
                let delta = if i == j { 1.0 } else { 0.0 };
                a * (delta - 2.0 * c[i] * c[j] / r2) / r2
            });
            for (a, b) in df.iter().zip(&ambient_data(&cfg, &x).euclid_grad_f) {
                assert!((a - b).abs() <= 1e-15 * (1.0 + a.abs()));
            }
            let ops = convert_operators(&cfg, &x, &df, &d2f).unwrap();
            assert!(close(&ops.riem_hess, &hessian_f_at(&cfg, &x), 1e-12));
        }
    }

    #[test]
    fn bakry_emery_examples() {
        let x = pt(&[1.0, 0.0, 0.0]);
        let flat = ManifoldConfig::origin(3, 0.0, 0.0).unwrap();
        for m in [
            EffectiveDim::Finite(3.0),
            EffectiveDim::Finite(7.0),
            EffectiveDim::Infinite,
        ] {
            assert_eq!(bakry_emery_at(&flat, m, &x).unwrap().max_abs(), 0.0);
        }
        let cfg = ManifoldConfig::origin(3, 0.0, -1.0).unwrap();
        let t = bakry_emery_at(&cfg, EffectiveDim::Finite(2.0), &x).unwrap();
        assert!(close(&t, &diag(&x, &[0.0, 1.0, 1.0]), 1e-15));
        let cfg = ManifoldConfig::origin(3, 0.0, 1.0).unwrap();
        let t = bakry_emery_at(&cfg, EffectiveDim::Infinite, &x).unwrap();
        assert!(close(&t, &diag(&x, &[1.0, -1.0, -1.0]), 1e-15));
        assert!(matches!(
            bakry_emery_at(&cfg, EffectiveDim::Finite(3.0), &x),
            Err(Error::DivergentParameter { n: 3 })
        ));
    }

    #[test]
    fn power_weight_examples() {
        assert!(power_weight_condition(3, -1.0, EffectiveDim::Finite(2.5)));
        assert!(!power_weight_condition(3, 1.0, EffectiveDim::Finite(4.0)));
        assert!(power_weight_condition(3, 0.0, EffectiveDim::Infinite));
        assert!(!power_weight_condition(3, -1.0, EffectiveDim::Infinite));
    }

    #[test]
    fn compatibility_examples() {
        let x = pt(&[1.0, 0.0, 0.0]);
        let g1 = 1.0 - 0.5f64.sqrt();
        let cfg = ManifoldConfig::origin(3, g1, 1.0).unwrap();
        assert!(compatibility_tensor_at(&cfg, &x).unwrap().max_abs() <= 1e-12);

        let cfg = ManifoldConfig::origin(3, 0.5, 1.0).unwrap();
        let y = pt(&[0.6, -0.8, 2.0]);
        let t = compatibility_tensor_at(&cfg, &y).unwrap();
        let r2 = y.norm() * y.norm();
        let want = SymTensor::identity_plus_outer(y.clone(), 0.5 / r2, -0.5 / r2, &y.unit());
        assert!(close(&t, &want, 1e-15));
        let g = ambient_data(&cfg, &y).metric;
        assert!(min_generalized_eigenvalue(&t, &g).unwrap() >= -1e-15);

        let cfg = ManifoldConfig::origin(3, 0.0, 1.0).unwrap();
        let t = compatibility_tensor_at(&cfg, &x).unwrap();
        assert!(close(&t, &diag(&x, &[0.0, -1.0, -1.0]), 1e-15));

        let cfg = ManifoldConfig::origin(3, 0.5, 0.0).unwrap();
        assert!(compatibility_tensor_at(&cfg, &x).is_err());
    }

    #[test]
    fn compatibility_is_bakry_emery_at_weighted_dimension() {
        let cfg = ManifoldConfig::origin(4, 0.4, 1.7).unwrap();
        let x = pt(&[0.1, 0.5, -0.2, 0.9]);
        let a = compatibility_tensor_at(&cfg, &x).unwrap();
        let b = bakry_emery_at(&cfg, EffectiveDim::Finite(4.0 + 1.7), &x).unwrap();
        assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn admissibility_examples() {
        let r = admissibility(3, 1.0, 0.5).unwrap();
        assert!((r.gamma1 - 0.292_893_218_813_452_5).abs() < 1e-15);
        assert!(r.admissible);
        assert!(!admissibility(3, 1.0, 0.1).unwrap().admissible);
        let r = admissibility(3, 1.0, 1.5).unwrap();
        assert!(r.admissible);
        assert_eq!(r.mode, Some(Mode::InfinityCentered));
        assert!((r.gamma2 - 1.707_106_781_186_547_5).abs() < 1e-15);
        assert!(matches!(
            admissibility(2, 0.0, 0.5),
            Err(Error::DegenerateThreshold { .. })
        ));
    }

    #[test]
    fn admissibility_boundaries_are_closed_at_gamma1_only() {
        let r = admissibility(3, 1.0, 0.0).unwrap();
        let at_g1 = admissibility(3, 1.0, r.gamma1).unwrap();
        assert!(at_g1.admissible);
        assert!(at_g1.condition_value.abs() < 1e-15);
        assert!(!admissibility(3, 1.0, r.gamma2).unwrap().admissible);
        assert!(!admissibility(3, 1.0, 1.0).unwrap().admissible);
        assert!(!admissibility(3, -0.5, 0.9).unwrap().admissible);
    }

    #[test]
    fn effective_dim_parsing() {
        assert_eq!("inf".parse::<EffectiveDim>(), Ok(EffectiveDim::Infinite));
        assert_eq!("4.5".parse::<EffectiveDim>(), Ok(EffectiveDim::Finite(4.5)));
        assert!("nan".parse::<EffectiveDim>().is_err());
    }
}
