//! The compatibility condition for overdetermined radial solutions on annuli.
//!
//! For the radius ratio `rho = b/a > 1` and the exponent `beta = n + alpha - 1`,
//!
//! ```text
//! F_rho(beta) = (rho^{1-beta} - 1)/(1 - beta) - (rho - 1)/2 (rho^{-beta} + 1)
//! ```
//!
//! equals `∫_1^rho (t^{-beta} - L(t)) dt` with `L` the secant of `t^{-beta}`
//! over `[1, rho]`, so its sign follows the convexity of `t^{-beta}`.

use crate::error::{Error, Result};
use crate::radial::{annulus_solve, Provenance, RadialProfile};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CompatParams {
    rho: f64,
    beta: f64,
}

impl CompatParams {
    pub fn new(rho: f64, beta: f64) -> Result<Self> {
        if !(rho > 1.0 && rho.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "radius ratio must satisfy rho > 1, got {rho}"
            )));
        }
        if !beta.is_finite() {
            return Err(Error::InvalidArgument("exponent must be finite".into()));
        }
        Ok(Self { rho, beta })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(rho - 1)/2 (rho^{-beta} + 1)`, the trapezoid term; sets the scale of `F`.
    fn trapezoid(&self) -> f64 {
        0.5 * (self.rho - 1.0) * ((-self.beta * self.rho.ln()).exp() + 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

/// Switch to the series for `(rho^eps - 1)/eps` below this `|eps|`.
const SERIES_BAND: f64 = 1e-6;

/// Values with `|F| <= ZERO_SNAP * trapezoid` are treated as zero.
pub const ZERO_SNAP: f64 = 1e-13;

/// `F_rho(beta)`, continuous through `beta = 1` where it equals
/// `ln rho - (rho - 1)(1/rho + 1)/2`.
pub fn f_value(p: &CompatParams) -> f64 {
    let log_rho = p.rho.ln();
    let eps = 1.0 - p.beta;
    let integral = if eps.abs() < SERIES_BAND {
        let x = eps * log_rho;
        log_rho * (1.0 + x / 2.0 + x * x / 6.0)
    } else {
        (eps * log_rho).exp_m1() / eps
    };
    integral - p.trapezoid()
}

/// Sign of `F` from the convexity argument: zero only at `beta` in `{-1, 0}`.
pub fn f_sign(p: &CompatParams) -> Sign {
    let b = p.beta;
    if b == 0.0 || b == -1.0 {
        Sign::Zero
    } else if b > -1.0 && b < 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

/// Sign of the computed `F`, with values below the rounding floor snapped to zero.
///
/// The floor is relative to the trapezoid term because `F` shrinks like
/// `(rho - 1)^3` while its two terms only shrink like `rho - 1`.
pub fn f_sign_numeric(p: &CompatParams) -> Sign {
    let v = f_value(p);
    if v.abs() <= ZERO_SNAP * p.trapezoid() {
        Sign::Zero
    } else if v > 0.0 {
        Sign::Positive
    } else {
        Sign::Negative
    }
}

const SCAN_STEP: f64 = 1e-3;
const BISECTION_TOL: f64 = 1e-10;
const MAX_SCAN_SAMPLES: f64 = 1e8;

/// Sign-changing roots of `beta -> F_rho(beta)` in `[beta_lo, beta_hi]`, ascending.
///
/// Samples every `1e-3`; brackets between consecutive non-zero samples of
/// opposite sign are bisected to width `1e-10`.
pub fn find_roots(rho: f64, beta_lo: f64, beta_hi: f64) -> Result<Vec<f64>> {
    CompatParams::new(rho, 0.0)?;
    if !(beta_lo < beta_hi) || !beta_hi.is_finite() || !beta_lo.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "scan interval [{beta_lo}, {beta_hi}] is empty"
        )));
    }
    let steps = ((beta_hi - beta_lo) / SCAN_STEP).ceil();
    if steps > MAX_SCAN_SAMPLES {
        return Err(Error::InvalidArgument("scan interval too wide".into()));
    }
    let steps = steps as usize;
    let sign_at = |beta: f64| f_sign_numeric(&CompatParams { rho, beta });

    let mut roots = Vec::new();
    let mut last: Option<(f64, Sign)> = None;
    for k in 0..=steps {
        let beta = if k == steps {
            beta_hi
        } else {
            beta_lo + k as f64 * SCAN_STEP
        };
        let s = sign_at(beta);
        if s == Sign::Zero {
            continue;
        }
        if let Some((prev, prev_sign)) = last {
            if prev_sign != s {
                roots.push(bisect(&sign_at, prev, prev_sign, beta));
            }
        }
        last = Some((beta, s));
    }
    Ok(roots)
}

fn bisect(sign_at: &impl Fn(f64) -> Sign, mut lo: f64, lo_sign: Sign, mut hi: f64) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        match sign_at(mid) {
            Sign::Zero => return mid,
            s if s == lo_sign => lo = mid,
            _ => hi = mid,
        }
    }
    0.5 * (lo + hi)
}

/// `beta = -1` solves the compatibility equation but belongs to the logarithmic
/// branch of the radial solution, where the condition reads `2t ln t = t^2 - 1`.
pub fn root_is_realizable(beta: f64) -> bool {
    (beta + 1.0).abs() > 1e-6
}

/// `t^{-beta} - L(t)`, where `L` is the secant of `t^{-beta}` through `t = 1` and `t = rho`.
pub fn secant_gap(p: &CompatParams, t: f64) -> f64 {
    let end = p.rho.powf(-p.beta);
    t.powf(-p.beta) - (1.0 + (end - 1.0) * (t - 1.0) / (p.rho - 1.0))
}

/// `t^2 - 1 - 2 t ln t`; zero at `t = 1` and positive for `t > 1`.
pub fn special_case_gap(t: f64) -> f64 {
    let d = t - 1.0;
    d * (t + 1.0) - 2.0 * t * d.ln_1p()
}

/// The overdetermined solution on an annulus for the weight `d_g^{1-n}`.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub profile: RadialProfile,
    pub alpha: f64,
    /// `|u'|` on both boundary spheres.
    pub c: f64,
    pub inner: f64,
    pub outer: f64,
}

/// `u = (r - a)(b - r)/2` with `alpha = 1 - n`: `Δ_f u = u'' = -1`, `u' = ±(b-a)/2` on the boundary.
pub fn counterexample(n: usize, a: f64, b: f64) -> Result<Counterexample> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension n = {n} < 2")));
    }
    if !(a > 0.0 && a < b && b.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "annulus needs 0 < a < b, got a = {a}, b = {b}"
        )));
    }
    let profile = RadialProfile::new(
        a,
        b,
        move |r| 0.5 * (r - a) * (b - r),
        move |r| 0.5 * (a + b) - r,
        |_| -1.0,
        Provenance::ClosedForm,
    )?;
    Ok(Counterexample {
        profile,
        alpha: 1.0 - n as f64,
        c: 0.5 * (b - a),
        inner: a,
        outer: b,
    })
}

/// The counterexample recomputed by the general annulus solver at exponent `n + alpha - 1 = 0`.
pub fn counterexample_via_solver(n: usize, a: f64, b: f64) -> Result<RadialProfile> {
    let ce = counterexample(n, a, b)?;
    annulus_solve(n, n as f64 + ce.alpha - 1.0, a, b)
}
