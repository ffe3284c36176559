//! Radial profiles `u(r)` of the g-distance: the explicit torsion solutions and
//! the general annulus solve for the weight `r^{beta} / r^{n-1}`.

use crate::error::{Error, Result};
use crate::geometry::{weighted_ball_perimeter, weighted_ball_volume, ManifoldConfig, Mode};
use crate::quadrature::{integrate_radial, QuadratureSettings};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Quadrature,
}

/// A radial function on `[r_min, r_max]` with its first two derivatives.
#[derive(Clone)]
pub struct RadialProfile {
    r_min: f64,
    r_max: f64,
    value: Evaluator,
    deriv: Evaluator,
    deriv2: Evaluator,
    provenance: Provenance,
}

impl fmt::Debug for RadialProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RadialProfile")
            .field("r_min", &self.r_min)
            .field("r_max", &self.r_max)
            .field("provenance", &self.provenance)
            .finish_non_exhaustive()
    }
}

impl RadialProfile {
    pub fn new(
        r_min: f64,
        r_max: f64,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv: impl Fn(f64) -> f64 + Send + Sync + 'static,
        deriv2: impl Fn(f64) -> f64 + Send + Sync + 'static,
        provenance: Provenance,
    ) -> Result<Self> {
        if !(r_min >= 0.0 && r_min < r_max) {
            return Err(Error::InvalidArgument(format!(
                "profile interval [{r_min}, {r_max}] is empty or negative"
            )));
        }
        Ok(Self {
            r_min,
            r_max,
            value: Arc::new(value),
            deriv: Arc::new(deriv),
            deriv2: Arc::new(deriv2),
            provenance,
        })
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn value(&self, r: f64) -> f64 {
        (self.value)(r)
    }

    pub fn deriv(&self, r: f64) -> f64 {
        (self.deriv)(r)
    }

    pub fn deriv2(&self, r: f64) -> f64 {
        (self.deriv2)(r)
    }
}

/// A g-metric ball `{r < R}` or annulus `{a < r < b}` around the singular point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    Ball { radius: f64 },
    Annulus { inner: f64, outer: f64 },
}

impl DomainSpec {
    pub fn ball(radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "ball radius must be positive, got {radius}"
            )));
        }
        Ok(DomainSpec::Ball { radius })
    }

    pub fn annulus(inner: f64, outer: f64) -> Result<Self> {
        if !(inner > 0.0 && inner < outer && outer.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "annulus needs 0 < a < b, got a = {inner}, b = {outer}"
            )));
        }
        Ok(DomainSpec::Annulus { inner, outer })
    }

    /// `(0, R)` or `(a, b)`.
    pub fn bounds(&self) -> (f64, f64) {
        match *self {
            DomainSpec::Ball { radius } => (0.0, radius),
            DomainSpec::Annulus { inner, outer } => (inner, outer),
        }
    }

    /// Radii where Dirichlet data is imposed.
    pub fn boundary_radii(&self) -> Vec<f64> {
        match *self {
            DomainSpec::Ball { radius } => vec![radius],
            DomainSpec::Annulus { inner, outer } => vec![inner, outer],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SerrinData {
    /// `|∂_ν u|` on the boundary.
    pub c: f64,
    /// `∫_Ω u dμ`.
    pub torsional_rigidity: f64,
}

fn require_integrable(cfg: &ManifoldConfig) -> Result<()> {
    if cfg.alpha() <= -(cfg.n() as f64) {
        Err(Error::NonIntegrableWeight {
            n: cfg.n(),
            alpha: cfg.alpha(),
        })
    } else {
        Ok(())
    }
}

/// Torsion solution `(R^2 - r^2) / (2(n+alpha))` on the ball of radius `R`.
///
/// The torsional rigidity is `w_n (1-gamma)^{n-1} R^{N+2} / (N^2 (N+2))` with
/// `N = n + alpha`; around infinity it is computed by quadrature instead.
pub fn ball_solution(cfg: &ManifoldConfig, radius: f64) -> Result<(RadialProfile, SerrinData)> {
    require_integrable(cfg)?;
    let dom = DomainSpec::ball(radius)?;
    let big_n = cfg.weighted_dim();
    let r2 = radius * radius;
    let profile = RadialProfile::new(
        0.0,
        radius,
        move |r| (r2 - r * r) / (2.0 * big_n),
        move |r| -r / big_n,
        move |_| -1.0 / big_n,
        Provenance::ClosedForm,
    )?;
    let torsional_rigidity = match cfg.mode() {
        Mode::OriginCentered => weighted_ball_volume(cfg, radius)? * r2 / (big_n * (big_n + 2.0)),
        Mode::InfinityCentered => integrate_radial(
            cfg,
            &dom,
            |r| profile.value(r),
            &QuadratureSettings::default(),
        )?,
    };
    Ok((
        profile,
        SerrinData {
            c: radius / big_n,
            torsional_rigidity,
        },
    ))
}

/// Solution of `u'' = -(1/n + k u)`, `u'(0) = 0`, `u(R) = 0` on the space-form ball.
pub fn space_form_solution(k: f64, n: usize, radius: f64) -> Result<RadialProfile> {
    if n < 2 || !(radius > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "need n >= 2, R > 0 and finite k; got n = {n}, R = {radius}, k = {k}"
        )));
    }
    let nf = n as f64;
    if k > 0.0 {
        let s = k.sqrt();
        let bound = std::f64::consts::FRAC_PI_2 / s;
        if radius >= bound {
            return Err(Error::RadiusTooLarge { k, radius, bound });
        }
        let denom = nf * (s * radius).cos();
        RadialProfile::new(
            0.0,
            radius,
            move |r| (s * r).cos() / (k * denom) - 1.0 / (nf * k),
            move |r| -(s * r).sin() / (s * denom),
            move |r| -(s * r).cos() / denom,
            Provenance::ClosedForm,
        )
    } else if k < 0.0 {
        let s = (-k).sqrt();
        let denom = nf * (s * radius).cosh();
        RadialProfile::new(
            0.0,
            radius,
            move |r| (s * r).cosh() / (k * denom) - 1.0 / (nf * k),
            move |r| -(s * r).sinh() / (s * denom),
            move |r| -(s * r).cosh() / denom,
            Provenance::ClosedForm,
        )
    } else {
        let r2 = radius * radius;
        RadialProfile::new(
            0.0,
            radius,
            move |r| (r2 - r * r) / (2.0 * nf),
            move |r| -r / nf,
            move |_| -1.0 / nf,
            Provenance::ClosedForm,
        )
    }
}

/// `V = r^2 / (2(n+alpha))` on `[0, ∞)`, with `∇²V = g/(n+alpha)` and `Δ_f V = 1`.
pub fn v_function(cfg: &ManifoldConfig) -> Result<RadialProfile> {
    let big_n = cfg.weighted_dim();
    if big_n == 0.0 {
        return Err(Error::InvalidArgument("n + alpha must be non-zero".into()));
    }
    RadialProfile::new(
        0.0,
        f64::INFINITY,
        move |r| r * r / (2.0 * big_n),
        move |r| r / big_n,
        move |_| 1.0 / big_n,
        Provenance::ClosedForm,
    )
}

/// Hessian-bound exponent `n / (n + alpha)` paired with the V-function.
pub fn hessian_bound_exponent(cfg: &ManifoldConfig) -> f64 {
    cfg.n() as f64 / cfg.weighted_dim()
}

/// `expm1(x) / x`, continuous at 0.
fn expm1_ratio(x: f64) -> f64 {
    if x.abs() < 1e-10 {
        1.0 + 0.5 * x
    } else {
        x.exp_m1() / x
    }
}

/// `∫_a^r s^p ds`, exact at `p = -1`.
fn power_integral(p: f64, a: f64, r: f64) -> f64 {
    let log_ratio = (r / a).ln();
    a.powf(p + 1.0) * log_ratio * expm1_ratio((p + 1.0) * log_ratio)
}

/// `∫_0^T e^{2t} t^k dt` by its positive power series.
fn exp_moment(k: i32, t: f64) -> f64 {
    let mut term = t.powi(k + 1);
    let mut sum = term / (k + 1) as f64;
    for j in 1..400 {
        term *= 2.0 * t / j as f64;
        let add = term / (k + 1 + j) as f64;
        sum += add;
        if add <= 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Closed-form pieces of the annulus solution `u = C J - K`.
#[derive(Debug, Clone, Copy)]
struct AnnulusKernel {
    beta: f64,
    a: f64,
}

const NEAR_LOG_BRANCH: f64 = 1e-5;

impl AnnulusKernel {
    /// `I(r) = ∫_a^r s^beta ds`.
    fn inner(&self, r: f64) -> f64 {
        power_integral(self.beta, self.a, r)
    }

    /// `J(r) = ∫_a^r s^{-beta} ds`.
    fn j(&self, r: f64) -> f64 {
        power_integral(-self.beta, self.a, r)
    }

    /// `K(r) = ∫_a^r s^{-beta} I(s) ds`.
    fn k(&self, r: f64) -> f64 {
        let delta = self.beta + 1.0;
        if delta.abs() < NEAR_LOG_BRANCH {
            // s^{-beta} I(s) = s log(s/a) E(-delta log(s/a)), E(x) = expm1(x)/x; expand E
            let t = (r / self.a).ln();
            let a2 = self.a * self.a;
            a2 * (exp_moment(1, t) - 0.5 * delta * exp_moment(2, t)
                + delta * delta / 6.0 * exp_moment(3, t))
        } else {
            (0.5 * (r * r - self.a * self.a) - self.a.powf(delta) * self.j(r)) / delta
        }
    }
}

/// Solves `u'' + (beta/r) u' = -1` on `(a, b)` with `u(a) = u(b) = 0`.
///
/// This is the radial torsion problem for the weight `w = r^{beta - (n-1)}`,
/// i.e. `r^{n-1} w = r^beta`. Written as `(r^beta u')' = -r^beta`, it integrates
/// to `u' = r^{-beta} (C - I(r))` and `u = C J(r) - K(r)`, with `C = K(b)/J(b)`.
pub fn annulus_solve(n: usize, beta: f64, a: f64, b: f64) -> Result<RadialProfile> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("dimension n = {n} < 2")));
    }
    if !beta.is_finite() {
        return Err(Error::InvalidArgument("exponent must be finite".into()));
    }
    DomainSpec::annulus(a, b)?;
    let kernel = AnnulusKernel { beta, a };
    let c = kernel.k(b) / kernel.j(b);
    let deriv = move |r: f64| r.powf(-beta) * (c - kernel.inner(r));
    RadialProfile::new(
        a,
        b,
        move |r| c * kernel.j(r) - kernel.k(r),
        deriv,
        move |r| -beta / r * deriv(r) - 1.0,
        Provenance::ClosedForm,
    )
}

/// `c = |Ω|_f / |∂Ω|_f = R / (n + alpha)` for a ball.
pub fn serrin_constant(cfg: &ManifoldConfig, dom: &DomainSpec) -> Result<f64> {
    match *dom {
        DomainSpec::Ball { radius } => {
            Ok(weighted_ball_volume(cfg, radius)? / weighted_ball_perimeter(cfg, radius)?)
        }
        DomainSpec::Annulus { .. } => Err(Error::UnsupportedDomain(
            "an annulus has no single boundary constant in general".into(),
        )),
    }
}
