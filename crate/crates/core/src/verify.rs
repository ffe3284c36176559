//! Numerical checks of the identities satisfied by radial torsion solutions.
//!
//! Pointwise quantities go through [`convert_operators`] on a sample point at
//! the requested g-distance, so the conformal conversion is exercised rather
//! than bypassed by the radial shortcuts.

use crate::curvature::{bakry_emery_at, EffectiveDim};
use crate::error::{Error, Result};
use crate::geometry::{
    ambient_data, convert_operators, metric_norm_sq, radial_derivatives, ConvertedOperators,
    ManifoldConfig, Mode,
};
use crate::quadrature::{
    chebyshev_nodes, integrate_radial, radial_density, weighted_volume, QuadratureSettings,
};
use crate::radial::{ball_solution, hessian_bound_exponent, DomainSpec, RadialProfile};
use crate::tensor::{dot, Point};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    LessEq,
    GreaterEq,
    Predicate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol: f64,
    pub pass: bool,
    pub relation: Relation,
    /// Equality-case flag, for checks of an inequality.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equality: Option<bool>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub extras: BTreeMap<String, f64>,
}

impl IdentityReport {
    fn base(name: &str, lhs: f64, rhs: f64, tol: f64, relation: Relation) -> Self {
        let abs_err = (lhs - rhs).abs();
        let rel_err = abs_err / lhs.abs().max(rhs.abs()).max(1e-300);
        Self {
            name: name.to_owned(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol,
            pass: false,
            relation,
            equality: None,
            extras: BTreeMap::new(),
        }
    }

    /// `lhs = rhs` up to `tol`, absolute or relative.
    pub fn equal(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let mut r = Self::base(name, lhs, rhs, tol, Relation::Equal);
        r.pass = r.rel_err <= tol || r.abs_err <= tol;
        r
    }

    /// `lhs >= rhs - tol`.
    pub fn at_least(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let mut r = Self::base(name, lhs, rhs, tol, Relation::GreaterEq);
        r.pass = lhs >= rhs - tol;
        r
    }

    /// `lhs <= rhs + tol`.
    pub fn at_most(name: &str, lhs: f64, rhs: f64, tol: f64) -> Self {
        let mut r = Self::base(name, lhs, rhs, tol, Relation::LessEq);
        r.pass = lhs <= rhs + tol;
        r
    }

    /// A boolean verdict carried with the numbers that produced it.
    pub fn predicate(name: &str, lhs: f64, rhs: f64, holds: bool) -> Self {
        let mut r = Self::base(name, lhs, rhs, 0.0, Relation::Predicate);
        r.pass = holds;
        r
    }

    pub fn with_extra(mut self, key: &str, value: f64) -> Self {
        self.extras.insert(key.to_owned(), value);
        self
    }
}

pub const PDE_TOL: f64 = 1e-10;
pub const FLUX_TOL: f64 = 1e-9;
pub const ENERGY_TOL: f64 = 1e-9;
pub const POHOZAEV_TOL: f64 = 1e-8;
pub const P_FUNCTION_TOL: f64 = 1e-10;
pub const BOCHNER_TOL: f64 = 1e-8;
pub const DIFFERENTIAL_IDENTITY_TOL: f64 = 1e-7;
pub const BOUNDARY_TOL: f64 = 1e-12;

const PDE_GRID: usize = 200;
const P_GRID: usize = 200;

/// Radial data of a profile pushed to a sample point at g-distance `r`.
struct PointData {
    x: Point,
    ops: ConvertedOperators,
}

fn at_radius(cfg: &ManifoldConfig, profile: &RadialProfile, r: f64) -> Result<PointData> {
    let x = cfg.sample_point(r)?;
    let (du, d2u) = radial_derivatives(cfg, &x, profile.deriv(r), profile.deriv2(r));
    let ops = convert_operators(cfg, &x, &du, &d2u)?;
    Ok(PointData { x, ops })
}

/// Central difference of `deriv2`, second order in `h`.
pub fn third_derivative(profile: &RadialProfile, r: f64, h: f64) -> f64 {
    (profile.deriv2(r + h) - profile.deriv2(r - h)) / (2.0 * h)
}

fn fd_step(r: f64) -> f64 {
    1e-4f64.min(0.5 * r)
}

/// `max |Δ_f u + 1|` over Chebyshev radii of the domain.
pub fn verify_pde(
    cfg: &ManifoldConfig,
    dom: &DomainSpec,
    profile: &RadialProfile,
) -> Result<IdentityReport> {
    let (lo, hi) = dom.bounds();
    let mut worst = 0.0f64;
    for r in chebyshev_nodes(lo, hi, PDE_GRID) {
        let d = at_radius(cfg, profile, r)?;
        worst = worst.max((d.ops.lap_f + 1.0).abs());
    }
    Ok(IdentityReport::equal("pde", worst, 0.0, PDE_TOL))
}

/// `|u'(R)|` of the ball solution against `|Ω|_f / |∂Ω|_f`, the volume by quadrature.
/// Around infinity the perimeter is the radial density at `R`.
pub fn verify_flux(
    cfg: &ManifoldConfig,
    radius: f64,
    q: &QuadratureSettings,
) -> Result<IdentityReport> {
    let (u, _) = ball_solution(cfg, radius)?;
    let dom = DomainSpec::ball(radius)?;
    let volume = weighted_volume(cfg, &dom, q)?;
    let perimeter = match cfg.mode() {
        Mode::OriginCentered => crate::geometry::weighted_ball_perimeter(cfg, radius)?,
        Mode::InfinityCentered => radial_density(cfg, radius),
    };
    Ok(
        IdentityReport::equal("flux", u.deriv(radius).abs(), volume / perimeter, FLUX_TOL)
            .with_extra("volume", volume)
            .with_extra("perimeter", perimeter),
    )
}

/// `|u'(a)| = |u'(b)|` on an annulus.
pub fn verify_flux_magnitude(dom: &DomainSpec, profile: &RadialProfile) -> Result<IdentityReport> {
    match *dom {
        DomainSpec::Annulus { inner, outer } => {
            let din = profile.deriv(inner).abs();
            let dout = profile.deriv(outer).abs();
            Ok(
                IdentityReport::equal("flux_magnitude", din, dout, BOUNDARY_TOL)
                    .with_extra("c", dout),
            )
        }
        DomainSpec::Ball { .. } => Err(Error::UnsupportedDomain(
            "flux magnitude compares the two boundary spheres of an annulus".into(),
        )),
    }
}

fn check_boundary(dom: &DomainSpec, profile: &RadialProfile) -> Result<()> {
    for r in dom.boundary_radii() {
        let v = profile.value(r);
        if !(v.abs() <= BOUNDARY_TOL) {
            return Err(Error::BoundaryNotZero {
                radius: r,
                value: v,
            });
        }
    }
    Ok(())
}

/// `∫ |∇u|^2 dμ = ∫ u dμ` for Dirichlet torsion solutions.
pub fn verify_energy(
    cfg: &ManifoldConfig,
    dom: &DomainSpec,
    profile: &RadialProfile,
    q: &QuadratureSettings,
) -> Result<IdentityReport> {
    check_boundary(dom, profile)?;
    let dirichlet = integrate_radial(cfg, dom, |r| profile.deriv(r).powi(2), q)?;
    let mass = integrate_radial(cfg, dom, |r| profile.value(r), q)?;
    Ok(IdentityReport::equal("energy", dirichlet, mass, ENERGY_TOL))
}

/// The two Pohozaev forms on the ball: `∫u = N/(N+2) c^2 |Ω|_f` and
/// `c^2 |Ω|_f = ∫u + 2 ∫ ∇²V(∇u, ∇u)` with `∇²V(∇u, ∇u) = u'^2 / N`.
pub fn verify_pohozaev(
    cfg: &ManifoldConfig,
    radius: f64,
    q: &QuadratureSettings,
) -> Result<[IdentityReport; 2]> {
    let (u, data) = ball_solution(cfg, radius)?;
    let dom = DomainSpec::ball(radius)?;
    let big_n = cfg.weighted_dim();
    let volume = weighted_volume(cfg, &dom, q)?;
    let mass = integrate_radial(cfg, &dom, |r| u.value(r), q)?;
    let hess_v = integrate_radial(cfg, &dom, |r| u.deriv(r).powi(2) / big_n, q)?;
    let c2_vol = data.c * data.c * volume;
    let ratio = IdentityReport::equal(
        "pohozaev_ratio",
        mass,
        big_n / (big_n + 2.0) * c2_vol,
        POHOZAEV_TOL,
    )
    .with_extra("ratio", mass / c2_vol)
    .with_extra("expected_ratio", big_n / (big_n + 2.0));
    let general = IdentityReport::equal(
        "pohozaev_general",
        c2_vol,
        mass + 2.0 * hess_v,
        POHOZAEV_TOL,
    );
    Ok([ratio, general])
}

/// Spread of `P = u'^2 + (2 beta / n) u` over the domain; constant in the rigid case.
pub fn verify_p_function(
    cfg: &ManifoldConfig,
    dom: &DomainSpec,
    profile: &RadialProfile,
    beta_hess: f64,
) -> IdentityReport {
    let coeff = 2.0 * beta_hess / cfg.n() as f64;
    let p = |r: f64| profile.deriv(r).powi(2) + coeff * profile.value(r);
    let (lo, hi) = dom.bounds();
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for r in chebyshev_nodes(lo, hi, P_GRID).into_iter().chain([lo, hi]) {
        let v = p(r);
        min = min.min(v);
        max = max.max(v);
    }
    let boundary = profile.deriv(hi);
    IdentityReport::equal("p_function", max - min, 0.0, P_FUNCTION_TOL)
        .with_extra("p_boundary", p(hi))
        .with_extra("c_squared", boundary * boundary)
        .with_extra("beta", beta_hess)
}

/// `Δ_f V = 1` and `∇²V = g / (n+alpha)` at the given radii.
pub fn verify_v_function(cfg: &ManifoldConfig, radii: &[f64]) -> Result<IdentityReport> {
    let v = crate::radial::v_function(cfg)?;
    let big_n = cfg.weighted_dim();
    let mut lap_defect = 0.0f64;
    let mut hess_defect = 0.0f64;
    for &r in radii {
        let d = at_radius(cfg, &v, r)?;
        lap_defect = lap_defect.max((d.ops.lap_f - 1.0).abs());
        let target = ambient_data(cfg, &d.x).metric.scaled(1.0 / big_n);
        let diff = d.ops.riem_hess.add_scaled(&target, -1.0);
        hess_defect = hess_defect.max(metric_norm_sq(cfg, &diff).sqrt());
    }
    Ok(
        IdentityReport::equal("v_function", lap_defect.max(hess_defect), 0.0, PDE_TOL)
            .with_extra("laplacian_defect", lap_defect)
            .with_extra("hessian_defect", hess_defect),
    )
}

/// Weighted Bochner inequality
/// `½Δ_f|∇u|^2 >= (Δ_f u)^2/m + g(∇u, ∇Δ_f u) + Ric_f^m(∇u, ∇u)`.
///
/// `lhs` is the smallest residual over the radii. The equality flag also
/// requires `∇²u = (Δ_g u / n) g` and `Δ_f u = -m/(m-n) g(∇f, ∇u)` (coefficient
/// `1` for `m = ∞`); the latter is void for `m = n`, which needs `alpha = 0`.
pub fn verify_bochner(
    cfg: &ManifoldConfig,
    profile: &RadialProfile,
    m: EffectiveDim,
    sample_radii: &[f64],
) -> Result<IdentityReport> {
    let n = cfg.n() as f64;
    let (inv_m, relation_coeff) = match m {
        EffectiveDim::Infinite => (0.0, Some(1.0)),
        EffectiveDim::Finite(mv) if mv == n => {
            if cfg.alpha() != 0.0 {
                return Err(Error::DivergentParameter { n: cfg.n() });
            }
            (1.0 / mv, None)
        }
        EffectiveDim::Finite(mv) if mv < n => {
            return Err(Error::InvalidArgument(format!(
                "Bochner inequality needs m >= n, got m = {mv}"
            )))
        }
        EffectiveDim::Finite(mv) => (1.0 / mv, Some(mv / (mv - n))),
    };
    if sample_radii.is_empty() {
        return Err(Error::InvalidArgument("no sample radii".into()));
    }
    let big_n = cfg.weighted_dim();
    let mut min_res = f64::INFINITY;
    let mut max_abs_res = 0.0f64;
    let mut hess_defect = 0.0f64;
    let mut relation_defect = 0.0f64;
    for &r in sample_radii {
        let d = at_radius(cfg, profile, r)?;
        let amb = ambient_data(cfg, &d.x);
        let (u1, u2) = (profile.deriv(r), profile.deriv2(r));
        let u3 = third_derivative(profile, r, fd_step(r));
        let ops = &d.ops;

        // q = |∇u|^2 = u'^2 is radial with q' = 2u'u'', q'' = 2u''^2 + 2u'u'''
        let (dq, d2q) = radial_derivatives(cfg, &d.x, 2.0 * u1 * u2, 2.0 * (u2 * u2 + u1 * u3));
        let half_lap_q = 0.5 * convert_operators(cfg, &d.x, &dq, &d2q)?.lap_f;

        // L = Δ_f u = u'' + (N-1)/r u'
        let dl = u3 + (big_n - 1.0) * (u2 / r - u1 / (r * r));
        let (grad_l, _) = radial_derivatives(cfg, &d.x, dl, 0.0);
        let grad_u_grad_l = dot(&ops.riem_grad, &grad_l);

        let ric = bakry_emery_at(cfg, m, &d.x)?.apply(&ops.riem_grad, &ops.riem_grad);
        let residual = half_lap_q - (ops.lap_f * ops.lap_f * inv_m + grad_u_grad_l + ric);
        min_res = min_res.min(residual);
        max_abs_res = max_abs_res.max(residual.abs());

        let umbilic = ops.riem_hess.add_scaled(&amb.metric, -ops.lap_g / n);
        hess_defect = hess_defect.max(metric_norm_sq(cfg, &umbilic).sqrt());
        if let Some(k) = relation_coeff {
            let drift = dot(&amb.euclid_grad_f, &ops.riem_grad);
            relation_defect = relation_defect.max((ops.lap_f + k * drift).abs());
        }
    }
    let equality =
        max_abs_res <= BOCHNER_TOL && hess_defect <= BOCHNER_TOL && relation_defect <= BOCHNER_TOL;
    let mut report = IdentityReport::at_least(&format!("bochner_m={m}"), min_res, 0.0, BOCHNER_TOL)
        .with_extra("max_abs_residual", max_abs_res)
        .with_extra("hessian_defect", hess_defect)
        .with_extra("relation_defect", relation_defect);
    report.equality = Some(equality);
    Ok(report)
}

/// Pointwise residual of
/// `e^f div(e^{-f}(u∇(|∇u|^2/2) - u Δ_f u ∇u - ½|∇u|^2 ∇u))
///   = u(|∇²u|^2 - (Δ_f u)^2) - (3/2)|∇u|^2 Δ_f u + u (Ric + ∇²f)(∇u, ∇u)`.
///
/// The vector field is `h(r) ∂_r`, whose weighted divergence is
/// `r^{1-N} (r^{N-1} h)'`; the derivative is a five-point difference.
pub fn verify_differential_identity(
    cfg: &ManifoldConfig,
    profile: &RadialProfile,
    sample_radii: &[f64],
) -> Result<IdentityReport> {
    if sample_radii.is_empty() {
        return Err(Error::InvalidArgument("no sample radii".into()));
    }
    let big_n = cfg.weighted_dim();
    let flux = |r: f64| {
        let (u, u1, u2) = (profile.value(r), profile.deriv(r), profile.deriv2(r));
        let lap_f = u2 + (big_n - 1.0) / r * u1;
        r.powf(big_n - 1.0) * (u * u1 * u2 - u * lap_f * u1 - 0.5 * u1 * u1 * u1)
    };
    let mut worst = 0.0f64;
    for &r in sample_radii {
        if !(r > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sample radius must be positive, got {r}"
            )));
        }
        let h = 1e-3f64.min(0.25 * r);
        let dflux = (flux(r - 2.0 * h) - 8.0 * flux(r - h) + 8.0 * flux(r + h) - flux(r + 2.0 * h))
            / (12.0 * h);
        let lhs = r.powf(1.0 - big_n) * dflux;

        let d = at_radius(cfg, profile, r)?;
        let ops = &d.ops;
        let u = profile.value(r);
        let hess_sq = metric_norm_sq(cfg, &ops.riem_hess);
        let ric_inf = bakry_emery_at(cfg, EffectiveDim::Infinite, &d.x)?
            .apply(&ops.riem_grad, &ops.riem_grad);
        let rhs = u * (hess_sq - ops.lap_f * ops.lap_f) - 1.5 * ops.grad_norm_sq_g * ops.lap_f
            + u * ric_inf;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(IdentityReport::equal(
        "differential_identity",
        worst,
        0.0,
        DIFFERENTIAL_IDENTITY_TOL,
    ))
}

/// `g(∇f, ∇u) <= 0` on the domain.
pub fn verify_drift_sign(
    cfg: &ManifoldConfig,
    dom: &DomainSpec,
    profile: &RadialProfile,
) -> Result<IdentityReport> {
    let (lo, hi) = dom.bounds();
    let mut worst = f64::NEG_INFINITY;
    for r in chebyshev_nodes(lo, hi, PDE_GRID) {
        let d = at_radius(cfg, profile, r)?;
        let amb = ambient_data(cfg, &d.x);
        worst = worst.max(dot(&amb.euclid_grad_f, &d.ops.riem_grad));
    }
    Ok(IdentityReport::at_most(
        "hypothesis_iii",
        worst,
        0.0,
        BOUNDARY_TOL,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Pde,
    Flux,
    Energy,
    Pohozaev,
    PFunction,
    Bochner,
    DifferentialIdentity,
    HypothesisIii,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::Pde,
        Check::Flux,
        Check::Energy,
        Check::Pohozaev,
        Check::PFunction,
        Check::Bochner,
        Check::DifferentialIdentity,
        Check::HypothesisIii,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Pde => "pde",
            Check::Flux => "flux",
            Check::Energy => "energy",
            Check::Pohozaev => "pohozaev",
            Check::PFunction => "p_function",
            Check::Bochner => "bochner",
            Check::DifferentialIdentity => "differential_identity",
            Check::HypothesisIii => "hypothesis_iii",
        }
    }
}

impl std::str::FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    /// Checks to run; empty means every applicable one.
    pub checks: Vec<Check>,
    pub quadrature: QuadratureSettings,
}

impl SuiteOptions {
    fn wants(&self, c: Check) -> bool {
        self.checks.is_empty() || self.checks.contains(&c)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckFailure {
    pub check: String,
    pub error: String,
    #[serde(skip)]
    pub source: Error,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SuiteOutcome {
    pub reports: Vec<IdentityReport>,
    pub errors: Vec<CheckFailure>,
}

impl SuiteOutcome {
    pub fn all_pass(&self) -> bool {
        self.errors.is_empty() && self.reports.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&IdentityReport> {
        self.reports.iter().find(|r| r.name == name)
    }

    fn record(&mut self, check: &str, result: Result<IdentityReport>) {
        match result {
            Ok(r) => self.reports.push(r),
            Err(e) => self.errors.push(CheckFailure {
                check: check.to_owned(),
                error: e.to_string(),
                source: e,
            }),
        }
    }
}

const SUITE_GRID: usize = 50;

/// Runs every applicable check in a fixed order, collecting errors per check.
///
/// Ball checks of flux and Pohozaev use the closed-form ball solution of the
/// same radius; the remaining checks use the supplied profile.
pub fn run_suite(
    cfg: &ManifoldConfig,
    dom: &DomainSpec,
    profile: &RadialProfile,
    options: &SuiteOptions,
) -> SuiteOutcome {
    let q = &options.quadrature;
    let mut out = SuiteOutcome::default();
    let (lo, hi) = dom.bounds();

    if options.wants(Check::Pde) {
        out.record("pde", verify_pde(cfg, dom, profile));
    }
    if options.wants(Check::Flux) {
        match *dom {
            DomainSpec::Ball { radius } => out.record("flux", verify_flux(cfg, radius, q)),
            DomainSpec::Annulus { .. } => {
                out.record("flux_magnitude", verify_flux_magnitude(dom, profile))
            }
        }
    }
    if options.wants(Check::Energy) {
        out.record("energy", verify_energy(cfg, dom, profile, q));
    }
    if options.wants(Check::Pohozaev) {
        if let DomainSpec::Ball { radius } = *dom {
            match verify_pohozaev(cfg, radius, q) {
                Ok([a, b]) => {
                    out.reports.push(a);
                    out.reports.push(b);
                }
                Err(e) => out.record("pohozaev", Err(e)),
            }
        }
    }
    if options.wants(Check::PFunction) {
        out.record(
            "p_function",
            Ok(verify_p_function(
                cfg,
                dom,
                profile,
                hessian_bound_exponent(cfg),
            )),
        );
    }
    let grid = chebyshev_nodes(lo, hi, SUITE_GRID);
    if options.wants(Check::Bochner) && cfg.alpha() > 0.0 {
        let weighted = EffectiveDim::Finite(cfg.weighted_dim());
        out.record("bochner", verify_bochner(cfg, profile, weighted, &grid));
        out.record(
            "bochner",
            verify_bochner(cfg, profile, EffectiveDim::Infinite, &grid),
        );
    }
    if options.wants(Check::DifferentialIdentity) {
        let radii = match *dom {
            DomainSpec::Ball { radius } => chebyshev_nodes(0.1 * radius, 0.9 * radius, SUITE_GRID),
            DomainSpec::Annulus { .. } => grid.clone(),
        };
        out.record(
            "differential_identity",
            verify_differential_identity(cfg, profile, &radii),
        );
    }
    if options.wants(Check::HypothesisIii) && cfg.alpha() == 0.0 {
        out.record("hypothesis_iii", verify_drift_sign(cfg, dom, profile));
    }
    out
}
