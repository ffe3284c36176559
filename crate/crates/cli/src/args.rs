//! Command-line grammar and the `--config` file that backs every flag.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serrin_core::Mode;

#[derive(Debug, Parser)]
#[command(
    name = "serrin",
    version,
    about = "Weighted Serrin problems on conformal cones"
)]
pub struct Cli {
    /// JSON file whose keys mirror the long flag names; flags win on conflict.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Distance map, Euclidean radius, weighted volume and perimeter of a g-ball.
    Geometry(ManifoldArgs),
    /// Explicit torsion solutions.
    #[command(subcommand)]
    Solve(SolveCommand),
    /// Admissibility plus the identity checks on the ball solution.
    Verify(VerifyArgs),
    /// Parameter sweep written as CSV.
    Sweep(SweepArgs),
    /// Roots of the annulus compatibility function.
    Compat(CompatArgs),
    /// The explicit annulus solution with `alpha = 1 - n` and its checks.
    Counterexample(CounterexampleArgs),
}

#[derive(Debug, Subcommand)]
pub enum SolveCommand {
    Ball(SolveBallArgs),
    Annulus(SolveAnnulusArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeArg {
    Origin,
    Infinity,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Origin => Mode::OriginCentered,
            ModeArg::Infinity => Mode::InfinityCentered,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ManifoldArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Defaults to `origin` for gamma < 1 and `infinity` for gamma > 1.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveBallArgs {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    /// Number of equispaced sample radii, endpoints included.
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SolveAnnulusArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub inner: Option<f64>,
    #[arg(long)]
    pub outer: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct QuadratureArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_depth: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub manifold: ManifoldArgs,
    /// Comma-separated subset of checks (pde, flux, energy, pohozaev,
    /// p_function, bochner, differential_identity, hypothesis_iii).
    #[arg(long, value_delimiter = ',')]
    pub suite: Option<Vec<String>>,
    #[command(flatten)]
    pub quadrature: QuadratureArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct CompatArgs {
    #[arg(long)]
    pub rho: Option<f64>,
    /// Scan interval for beta; defaults to [-5, 5].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_hyphen_values = true)]
    pub scan: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
    /// Conformal exponent of the ambient metric; the profile does not depend on it.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
}

/// Contents of `--config`. Every key is optional and named after its flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub n: Option<usize>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub radius: Option<f64>,
    pub mode: Option<ModeArg>,
    pub samples: Option<usize>,
    pub inner: Option<f64>,
    pub outer: Option<f64>,
    pub suite: Option<Vec<String>>,
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_depth: Option<usize>,
    pub spec: Option<PathBuf>,
    pub out: Option<PathBuf>,
    pub rho: Option<f64>,
    pub scan: Option<[f64; 2]>,
    pub a: Option<f64>,
    pub b: Option<f64>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}

/// A flag value, falling back to the config file; missing both is a usage error.
pub fn pick<T>(flag: Option<T>, file: Option<T>, name: &str) -> Result<T, String> {
    flag.or(file).ok_or_else(|| {
        format!(
            "missing --{name} (or \"{}\" in --config)",
            name.replace('-', "_")
        )
    })
}
