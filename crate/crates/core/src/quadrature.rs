//! Adaptive Simpson quadrature and radial integration against the weighted measure.

use crate::error::{Error, Result};
use crate::geometry::{sphere_area, ManifoldConfig};
use crate::radial::DomainSpec;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_depth: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_depth: 40,
        }
    }
}

impl QuadratureSettings {
    pub fn new(rel_tol: f64, abs_tol: f64, max_depth: usize) -> Result<Self> {
        let s = Self {
            rel_tol,
            abs_tol,
            max_depth,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) || self.max_depth < 4 {
            return Err(Error::InvalidArgument(format!(
                "quadrature needs positive tolerances and max_depth >= 4, got {self:?}"
            )));
        }
        Ok(())
    }
}

const PANELS: usize = 8;

struct Simpson<'a, F> {
    f: &'a F,
    max_depth: usize,
    exhausted: bool,
}

impl<F: Fn(f64) -> f64> Simpson<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn refine(
        &mut self,
        a: f64,
        fa: f64,
        m: f64,
        fm: f64,
        b: f64,
        fb: f64,
        whole: f64,
        eps: f64,
        depth: usize,
    ) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        if depth >= self.max_depth {
            self.exhausted = true;
            return left + right + delta / 15.0;
        }
        self.refine(a, fa, lm, flm, m, fm, left, 0.5 * eps, depth + 1)
            + self.refine(m, fm, rm, frm, b, fb, right, 0.5 * eps, depth + 1)
    }
}

/// Adaptive Simpson rule with Richardson correction on `[lo, hi]`.
///
/// The interval is first split into equal panels; the tolerance
/// `max(abs_tol, rel_tol * |coarse estimate|)` is shared among them and halved
/// at every bisection level. Node placement is deterministic.
pub fn adaptive_simpson(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    q: &QuadratureSettings,
) -> Result<f64> {
    q.validate()?;
    if !(lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integration bounds must be finite, got [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    let width = (hi - lo) / PANELS as f64;
    let nodes: Vec<f64> = (0..=2 * PANELS)
        .map(|k| {
            if k == 2 * PANELS {
                hi
            } else {
                lo + 0.5 * width * k as f64
            }
        })
        .collect();
    let values: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let wholes: Vec<f64> = (0..PANELS)
        .map(|p| {
            let (a, b) = (nodes[2 * p], nodes[2 * p + 2]);
            (b - a) / 6.0 * (values[2 * p] + 4.0 * values[2 * p + 1] + values[2 * p + 2])
        })
        .collect();
    let coarse: f64 = wholes.iter().sum();
    let eps = q.abs_tol.max(q.rel_tol * coarse.abs()) / PANELS as f64;

    let mut engine = Simpson {
        f: &f,
        max_depth: q.max_depth,
        exhausted: false,
    };
    let mut total = 0.0;
    for p in 0..PANELS {
        total += engine.refine(
            nodes[2 * p],
            values[2 * p],
            nodes[2 * p + 1],
            values[2 * p + 1],
            nodes[2 * p + 2],
            values[2 * p + 2],
            wholes[p],
            eps,
            0,
        );
    }
    if !total.is_finite() {
        return Err(Error::InvalidArgument(
            "integrand is not finite on the integration interval".into(),
        ));
    }
    if engine.exhausted {
        return Err(Error::MaxDepthExceeded {
            max_depth: q.max_depth,
            estimate: total,
        });
    }
    Ok(total)
}

/// `∫_Ω h(r) dμ = w_n |1-gamma|^{n-1} ∫ h(r) r^{n+alpha-1} dr` for a radial integrand.
///
/// On a ball with `alpha < 0` the density is singular at `r = 0`; there the
/// substitution `s = r^{(n+alpha)/2}` turns it into `(2/(n+alpha)) s h(s^{2/(n+alpha)}) ds`.
pub fn integrate_radial(
    cfg: &ManifoldConfig,
    dom: &DomainSpec,
    integrand: impl Fn(f64) -> f64,
    q: &QuadratureSettings,
) -> Result<f64> {
    let big_n = cfg.weighted_dim();
    let factor = sphere_area(cfg.n()) * cfg.cone_slope().powi(cfg.n() as i32 - 1);
    let integral = match *dom {
        DomainSpec::Ball { radius } => {
            if cfg.alpha() <= -(cfg.n() as f64) {
                return Err(Error::NonIntegrableWeight {
                    n: cfg.n(),
                    alpha: cfg.alpha(),
                });
            }
            if cfg.alpha() < 0.0 {
                let s_max = radius.powf(0.5 * big_n);
                let inv = 2.0 / big_n;
                adaptive_simpson(|s| inv * s * integrand(s.powf(inv)), 0.0, s_max, q)
            } else {
                adaptive_simpson(|r| integrand(r) * r.powf(big_n - 1.0), 0.0, radius, q)
            }
        }
        DomainSpec::Annulus { inner, outer } => {
            adaptive_simpson(|r| integrand(r) * r.powf(big_n - 1.0), inner, outer, q)
        }
    };
    integral.map(|v| factor * v).map_err(|e| match e {
        Error::MaxDepthExceeded {
            max_depth,
            estimate,
        } => Error::MaxDepthExceeded {
            max_depth,
            estimate: factor * estimate,
        },
        other => other,
    })
}

/// Density of `μ` in the distance coordinate, `w_n |1-gamma|^{n-1} r^{n+alpha-1}`.
///
/// This is the weighted area of the distance sphere of radius `r` in either mode.
pub fn radial_density(cfg: &ManifoldConfig, r: f64) -> f64 {
    sphere_area(cfg.n())
        * cfg.cone_slope().powi(cfg.n() as i32 - 1)
        * r.powf(cfg.weighted_dim() - 1.0)
}

/// Weighted volume `|Ω|_f` by quadrature; the only route in infinity-centered mode.
pub fn weighted_volume(
    cfg: &ManifoldConfig,
    dom: &DomainSpec,
    q: &QuadratureSettings,
) -> Result<f64> {
    integrate_radial(cfg, dom, |_| 1.0, q)
}

/// `k` Chebyshev nodes of the first kind on `(lo, hi)`, ascending, endpoints excluded.
pub fn chebyshev_nodes(lo: f64, hi: f64, k: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    (0..k)
        .map(|j| mid - half * ((2 * j + 1) as f64 * PI / (2 * k) as f64).cos())
        .collect()
}
