use serde::Serialize;
use serrin_core::compat::{counterexample, find_roots, root_is_realizable};
use serrin_core::curvature::{admissibility, AdmissibilityResult};
use serrin_core::geometry::{
    euclidean_ball_radius, geodesic_distance, weighted_ball_perimeter, weighted_ball_volume,
};
use serrin_core::quadrature::{radial_density, weighted_volume};
use serrin_core::radial::{annulus_solve, ball_solution, SerrinData};
use serrin_core::verify::{run_suite, Check, CheckFailure, SuiteOptions, BOUNDARY_TOL};
use serrin_core::{
    DomainSpec, Error, IdentityReport, ManifoldConfig, Mode, Point, QuadratureSettings,
    RadialProfile,
};

use crate::args::{
    pick, CompatArgs, ConfigFile, CounterexampleArgs, ManifoldArgs, ModeArg, SolveAnnulusArgs,
    SolveBallArgs, VerifyArgs,
};
use crate::json::document;

/// What the process should exit with once the document is printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Failed,
    NumericError,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::Failed => 1,
            Status::NumericError => 3,
        }
    }

    fn from_checks(errors: usize, all_pass: bool) -> Self {
        if errors > 0 {
            Status::NumericError
        } else if all_pass {
            Status::Ok
        } else {
            Status::Failed
        }
    }
}

#[derive(Debug)]
pub enum Failure {
    /// Bad input: message and usage go to standard error, exit 2.
    Usage(String),
    /// Numeric or I/O failure with nothing useful computed; an error document is emitted, exit 3.
    Runtime { kind: &'static str, message: String },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidConfig(_) | Error::InvalidPoint(_) | Error::InvalidArgument(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Runtime {
                kind: error_kind(&other),
                message: other.to_string(),
            },
        }
    }
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

pub struct Emitted {
    pub json: String,
    pub status: Status,
}

pub type Outcome = Result<Emitted, Failure>;

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::InvalidConfig(_) => "invalid_config",
        Error::InvalidPoint(_) => "invalid_point",
        Error::InvalidArgument(_) => "invalid_argument",
        Error::NonIntegrableWeight { .. } => "non_integrable_weight",
        Error::DivergentParameter { .. } => "divergent_parameter",
        Error::DegenerateThreshold { .. } => "degenerate_threshold",
        Error::NotPositiveDefinite { .. } => "not_positive_definite",
        Error::RadiusTooLarge { .. } => "radius_too_large",
        Error::UnsupportedDomain(_) => "unsupported_domain",
        Error::UnsupportedMode(_) => "unsupported_mode",
        Error::MaxDepthExceeded { .. } => "max_depth_exceeded",
        Error::BoundaryNotZero { .. } => "boundary_not_zero",
    }
}

pub fn error_document(kind: &str, message: &str) -> String {
    #[derive(Serialize)]
    struct Body<'a> {
        error: ErrorEntry<'a>,
    }
    document(
        "error",
        Body {
            error: ErrorEntry {
                check: None,
                kind,
                message,
            },
        },
    )
}

#[derive(Serialize)]
struct ErrorEntry<'a> {
    #[serde(skip_serializing_if = "Option::is_none")]
    check: Option<&'a str>,
    kind: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct OwnedError {
    check: String,
    kind: &'static str,
    message: String,
}

impl From<&CheckFailure> for OwnedError {
    fn from(f: &CheckFailure) -> Self {
        OwnedError {
            check: f.check.clone(),
            kind: error_kind(&f.source),
            message: f.error.clone(),
        }
    }
}

fn owned_error(check: &str, e: &Error) -> OwnedError {
    OwnedError {
        check: check.to_owned(),
        kind: error_kind(e),
        message: e.to_string(),
    }
}

fn manifold(
    n: Option<usize>,
    gamma: Option<f64>,
    alpha: Option<f64>,
    mode: Option<ModeArg>,
    cfg: &ConfigFile,
) -> Result<ManifoldConfig, Failure> {
    let n = pick(n, cfg.n, "n")?;
    let gamma = pick(gamma, cfg.gamma, "gamma")?;
    let alpha = pick(alpha, cfg.alpha, "alpha")?;
    Ok(match mode.or(cfg.mode) {
        Some(m) => ManifoldConfig::new(n, gamma, alpha, m.into())?,
        None => ManifoldConfig::infer(n, gamma, alpha)?,
    })
}

fn manifold_and_radius(
    args: &ManifoldArgs,
    cfg: &ConfigFile,
) -> Result<(ManifoldConfig, f64), Failure> {
    let m = manifold(args.n, args.gamma, args.alpha, args.mode, cfg)?;
    let radius = pick(args.radius, cfg.radius, "radius")?;
    DomainSpec::ball(radius)?;
    Ok((m, radius))
}

#[derive(Serialize)]
struct DistanceSample {
    euclidean_norm: f64,
    distance: f64,
}

#[derive(Serialize)]
struct DistanceMap {
    /// `d_g = scale * |x|^exponent`
    exponent: f64,
    scale: f64,
    samples: Vec<DistanceSample>,
}

#[derive(Serialize)]
struct GeometryBody {
    config: ManifoldConfig,
    radius: f64,
    distance_map: DistanceMap,
    euclidean_radius: f64,
    /// `inside` for `{|x| < rho}`, `outside` for `{|x| > rho}`.
    region: &'static str,
    volume: Option<f64>,
    volume_method: &'static str,
    perimeter: Option<f64>,
    errors: Vec<OwnedError>,
}

pub fn geometry(args: &ManifoldArgs, cfg: &ConfigFile) -> Outcome {
    let (m, radius) = manifold_and_radius(args, cfg)?;
    let rho = euclidean_ball_radius(&m, radius)?;
    let mut samples = Vec::new();
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] {
        let x = Point::along(&vec![1.0; m.n()], t * rho)?;
        samples.push(DistanceSample {
            euclidean_norm: t * rho,
            distance: geodesic_distance(&m, &x),
        });
    }
    let exponent = 1.0 - m.gamma();
    let mut errors = Vec::new();
    let (volume, volume_method, perimeter) = match m.mode() {
        Mode::OriginCentered => (
            weighted_ball_volume(&m, radius),
            "closed_form",
            weighted_ball_perimeter(&m, radius),
        ),
        Mode::InfinityCentered => (
            weighted_volume(
                &m,
                &DomainSpec::ball(radius)?,
                &QuadratureSettings::default(),
            ),
            "quadrature",
            Ok(radial_density(&m, radius)),
        ),
    };
    let volume = volume
        .map_err(|e| errors.push(owned_error("volume", &e)))
        .ok();
    let perimeter = perimeter
        .map_err(|e| errors.push(owned_error("perimeter", &e)))
        .ok();
    let status = Status::from_checks(errors.len(), true);
    let body = GeometryBody {
        config: m,
        radius,
        distance_map: DistanceMap {
            exponent,
            scale: 1.0 / exponent.abs(),
            samples,
        },
        euclidean_radius: rho,
        region: match m.mode() {
            Mode::OriginCentered => "inside",
            Mode::InfinityCentered => "outside",
        },
        volume,
        volume_method,
        perimeter,
        errors,
    };
    Ok(Emitted {
        json: document("geometry", body),
        status,
    })
}

#[derive(Serialize)]
struct Sample {
    r: f64,
    u: f64,
    du: f64,
    d2u: f64,
}

fn sample_profile(u: &RadialProfile, count: usize) -> Result<Vec<Sample>, Failure> {
    if count < 2 {
        return Err(Failure::Usage(format!(
            "--samples must be at least 2, got {count}"
        )));
    }
    let (lo, hi) = (u.r_min(), u.r_max());
    Ok((0..count)
        .map(|k| {
            let r = if k + 1 == count {
                hi
            } else {
                lo + (hi - lo) * k as f64 / (count - 1) as f64
            };
            Sample {
                r,
                u: u.value(r),
                du: u.deriv(r),
                d2u: u.deriv2(r),
            }
        })
        .collect())
}

const DEFAULT_SAMPLES: usize = 11;

#[derive(Serialize)]
struct SolveBallBody {
    config: ManifoldConfig,
    domain: DomainSpec,
    serrin: SerrinData,
    samples: Vec<Sample>,
}

pub fn solve_ball(args: &SolveBallArgs, cfg: &ConfigFile) -> Outcome {
    let (m, radius) = manifold_and_radius(&args.manifold, cfg)?;
    let count = args.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    let (u, serrin) = ball_solution(&m, radius)?;
    let body = SolveBallBody {
        config: m,
        domain: DomainSpec::ball(radius)?,
        serrin,
        samples: sample_profile(&u, count)?,
    };
    Ok(Emitted {
        json: document("solve_ball", body),
        status: Status::Ok,
    })
}

#[derive(Serialize)]
struct AnnulusBoundary {
    inner_flux: f64,
    outer_flux: f64,
    /// `|u'(a)| = |u'(b)|` to the boundary tolerance.
    overdetermined: bool,
}

#[derive(Serialize)]
struct SolveAnnulusBody {
    config: ManifoldConfig,
    domain: DomainSpec,
    /// Coefficient of `u'/r` in the radial drift Laplacian.
    drift: f64,
    boundary: AnnulusBoundary,
    torsional_rigidity: Option<f64>,
    samples: Vec<Sample>,
    errors: Vec<OwnedError>,
}

pub fn solve_annulus(args: &SolveAnnulusArgs, cfg: &ConfigFile) -> Outcome {
    let m = manifold(args.n, args.gamma, args.alpha, args.mode, cfg)?;
    let inner = pick(args.inner, cfg.inner, "inner")?;
    let outer = pick(args.outer, cfg.outer, "outer")?;
    let dom = DomainSpec::annulus(inner, outer)?;
    let drift = m.weighted_dim() - 1.0;
    let u = annulus_solve(m.n(), drift, inner, outer)?;
    let count = args.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    let mut errors = Vec::new();
    let tau = serrin_core::quadrature::integrate_radial(
        &m,
        &dom,
        |r| u.value(r),
        &QuadratureSettings::default(),
    )
    .map_err(|e| errors.push(owned_error("torsional_rigidity", &e)))
    .ok();
    let (din, dout) = (u.deriv(inner).abs(), u.deriv(outer).abs());
    let status = Status::from_checks(errors.len(), true);
    let body = SolveAnnulusBody {
        config: m,
        domain: dom,
        drift,
        boundary: AnnulusBoundary {
            inner_flux: din,
            outer_flux: dout,
            overdetermined: (din - dout).abs() <= BOUNDARY_TOL,
        },
        torsional_rigidity: tau,
        samples: sample_profile(&u, count)?,
        errors,
    };
    Ok(Emitted {
        json: document("solve_annulus", body),
        status,
    })
}

fn admissibility_report(m: &ManifoldConfig, adm: &AdmissibilityResult) -> IdentityReport {
    let threshold = match m.mode() {
        Mode::OriginCentered => adm.gamma1,
        Mode::InfinityCentered => adm.gamma2,
    };
    IdentityReport::predicate("admissibility", m.gamma(), threshold, adm.admissible)
        .with_extra("alpha", m.alpha())
        .with_extra("gamma1", adm.gamma1)
        .with_extra("gamma2", adm.gamma2)
        .with_extra("condition_value", adm.condition_value)
}

#[derive(Serialize)]
struct VerifyBody {
    config: ManifoldConfig,
    domain: DomainSpec,
    admissibility: Option<AdmissibilityResult>,
    reports: Vec<IdentityReport>,
    errors: Vec<OwnedError>,
    all_pass: bool,
}

fn quadrature(args: &VerifyArgs, cfg: &ConfigFile) -> Result<QuadratureSettings, Failure> {
    let d = QuadratureSettings::default();
    let q = &args.quadrature;
    Ok(QuadratureSettings::new(
        q.rel_tol.or(cfg.rel_tol).unwrap_or(d.rel_tol),
        q.abs_tol.or(cfg.abs_tol).unwrap_or(d.abs_tol),
        q.max_depth.or(cfg.max_depth).unwrap_or(d.max_depth),
    )?)
}

pub fn verify(args: &VerifyArgs, cfg: &ConfigFile) -> Outcome {
    let (m, radius) = manifold_and_radius(&args.manifold, cfg)?;
    let checks = args
        .suite
        .clone()
        .or_else(|| cfg.suite.clone())
        .unwrap_or_default()
        .iter()
        .map(|s| s.trim().parse::<Check>())
        .collect::<Result<Vec<_>, _>>()?;
    let options = SuiteOptions {
        checks,
        quadrature: quadrature(args, cfg)?,
    };
    let dom = DomainSpec::ball(radius)?;

    let mut reports = Vec::new();
    let mut errors = Vec::new();
    let adm = match admissibility(m.n(), m.alpha(), m.gamma()) {
        Ok(a) => {
            reports.push(admissibility_report(&m, &a));
            Some(a)
        }
        Err(e) => {
            errors.push(owned_error("admissibility", &e));
            None
        }
    };
    match ball_solution(&m, radius) {
        Ok((u, _)) => {
            let out = run_suite(&m, &dom, &u, &options);
            reports.extend(out.reports);
            errors.extend(out.errors.iter().map(OwnedError::from));
        }
        Err(e) => errors.push(owned_error("ball_solution", &e)),
    }
    let all_pass = errors.is_empty() && reports.iter().all(|r| r.pass);
    let status = Status::from_checks(errors.len(), all_pass);
    let body = VerifyBody {
        config: m,
        domain: dom,
        admissibility: adm,
        reports,
        errors,
        all_pass,
    };
    Ok(Emitted {
        json: document("verify", body),
        status,
    })
}

#[derive(Serialize)]
struct Root {
    beta: f64,
    realizable: bool,
}

#[derive(Serialize)]
struct CompatBody {
    rho: f64,
    scan: [f64; 2],
    roots: Vec<Root>,
}

pub fn compat(args: &CompatArgs, cfg: &ConfigFile) -> Outcome {
    let rho = pick(args.rho, cfg.rho, "rho")?;
    let [lo, hi] = match (&args.scan, cfg.scan) {
        (Some(v), _) => [v[0], v[1]],
        (None, Some(s)) => s,
        (None, None) => [-5.0, 5.0],
    };
    let roots = find_roots(rho, lo, hi)?
        .into_iter()
        .map(|beta| Root {
            beta,
            realizable: root_is_realizable(beta),
        })
        .collect();
    Ok(Emitted {
        json: document(
            "compat",
            CompatBody {
                rho,
                scan: [lo, hi],
                roots,
            },
        ),
        status: Status::Ok,
    })
}

#[derive(Serialize)]
struct Package {
    alpha: f64,
    c: f64,
    inner: f64,
    outer: f64,
}

#[derive(Serialize)]
struct CounterexampleBody {
    config: ManifoldConfig,
    domain: DomainSpec,
    package: Package,
    samples: Vec<Sample>,
    reports: Vec<IdentityReport>,
    errors: Vec<OwnedError>,
    all_pass: bool,
}

pub fn counterexample_cmd(args: &CounterexampleArgs, cfg: &ConfigFile) -> Outcome {
    let n = pick(args.n, cfg.n, "n")?;
    let a = pick(args.a, cfg.a, "a")?;
    let b = pick(args.b, cfg.b, "b")?;
    let gamma = args.gamma.or(cfg.gamma).unwrap_or(0.0);
    let count = args.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    let ce = counterexample(n, a, b)?;
    let m = ManifoldConfig::infer(n, gamma, ce.alpha)?;
    let dom = DomainSpec::annulus(a, b)?;
    let out = run_suite(&m, &dom, &ce.profile, &SuiteOptions::default());
    let all_pass = out.all_pass();
    let status = Status::from_checks(out.errors.len(), all_pass);
    let body = CounterexampleBody {
        config: m,
        domain: dom,
        package: Package {
            alpha: ce.alpha,
            c: ce.c,
            inner: ce.inner,
            outer: ce.outer,
        },
        samples: sample_profile(&ce.profile, count)?,
        errors: out.errors.iter().map(OwnedError::from).collect(),
        reports: out.reports,
        all_pass,
    };
    Ok(Emitted {
        json: document("counterexample", body),
        status,
    })
}
