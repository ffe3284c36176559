//! Parameter sweeps over `(alpha, gamma)` written as CSV.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serrin_core::compat::{f_sign, f_value, CompatParams, Sign};
use serrin_core::curvature::admissibility;
use serrin_core::radial::ball_solution;
use serrin_core::verify::{verify_flux, verify_pohozaev};
use serrin_core::{ManifoldConfig, QuadratureSettings};

pub const MAX_CELLS: usize = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(alias = "admissibility")]
    Admissibility,
    #[serde(alias = "compat_roots")]
    CompatRoots,
    #[serde(alias = "serrin_constant")]
    SerrinConstant,
    #[serde(alias = "pohozaev_ratio")]
    PohozaevRatio,
}

impl Quantity {
    fn label(self) -> &'static str {
        match self {
            Quantity::Admissibility => "Admissibility",
            Quantity::CompatRoots => "CompatRoots",
            Quantity::SerrinConstant => "SerrinConstant",
            Quantity::PohozaevRatio => "PohozaevRatio",
        }
    }
}

fn default_rho() -> f64 {
    2.0
}

fn default_radius() -> f64 {
    1.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// `[lo, hi, step]`
    pub alpha_range: [f64; 3],
    pub gamma_range: [f64; 3],
    pub n: usize,
    pub quantity: Quantity,
    /// Annulus ratio for `CompatRoots`.
    #[serde(default = "default_rho")]
    pub rho: f64,
    /// Ball radius for `SerrinConstant` and `PohozaevRatio`.
    #[serde(default = "default_radius")]
    pub radius: f64,
}

fn axis(name: &str, [lo, hi, step]: [f64; 3]) -> Result<Vec<f64>, String> {
    if !(lo.is_finite() && hi.is_finite() && step.is_finite()) || !(lo < hi) || !(step > 0.0) {
        return Err(format!(
            "{name}: need finite lo < hi and step > 0, got [{lo}, {hi}, {step}]"
        ));
    }
    let count = ((hi - lo) / step * (1.0 + 1e-12)).floor() + 1.0;
    if count > MAX_CELLS as f64 {
        return Err(format!("{name}: {count} points exceed the grid limit"));
    }
    Ok((0..count as usize).map(|k| lo + k as f64 * step).collect())
}

impl SweepSpec {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read sweep spec {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("bad sweep spec {}: {e}", path.display()))
    }

    pub fn axes(&self) -> Result<(Vec<f64>, Vec<f64>), String> {
        let alphas = axis("alpha_range", self.alpha_range)?;
        let gammas = axis("gamma_range", self.gamma_range)?;
        if alphas.len().saturating_mul(gammas.len()) > MAX_CELLS {
            return Err(format!(
                "grid of {} x {} points exceeds {MAX_CELLS}",
                alphas.len(),
                gammas.len()
            ));
        }
        if self.n < 2 {
            return Err(format!("dimension n = {} < 2", self.n));
        }
        Ok((alphas, gammas))
    }
}

/// One CSV row; `value = None` marks a cell outside the quantity's domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Cell {
    pub alpha: f64,
    pub gamma: f64,
    pub value: Option<f64>,
    pub flag: bool,
}

fn evaluate(spec: &SweepSpec, alpha: f64, gamma: f64) -> Option<(f64, bool)> {
    let n = spec.n;
    let q = QuadratureSettings::default();
    match spec.quantity {
        Quantity::Admissibility => {
            let a = admissibility(n, alpha, gamma).ok()?;
            Some((a.condition_value, a.admissible))
        }
        Quantity::CompatRoots => {
            let p = CompatParams::new(spec.rho, n as f64 + alpha - 1.0).ok()?;
            Some((f_value(&p), f_sign(&p) == Sign::Zero))
        }
        Quantity::SerrinConstant => {
            let cfg = ManifoldConfig::infer(n, gamma, alpha).ok()?;
            let (_, data) = ball_solution(&cfg, spec.radius).ok()?;
            let flux = verify_flux(&cfg, spec.radius, &q).ok()?;
            Some((data.c, flux.pass))
        }
        Quantity::PohozaevRatio => {
            let cfg = ManifoldConfig::infer(n, gamma, alpha).ok()?;
            let [ratio, _] = verify_pohozaev(&cfg, spec.radius, &q).ok()?;
            Some((ratio.extras["ratio"], ratio.pass))
        }
    }
}

/// Cells in row-major order: alpha outer, gamma inner. Rows run in parallel.
pub fn run(spec: &SweepSpec) -> Result<Vec<Cell>, String> {
    let (alphas, gammas) = spec.axes()?;
    let rows: Vec<Vec<Cell>> = alphas
        .par_iter()
        .map(|&alpha| {
            gammas
                .iter()
                .map(|&gamma| {
                    let result = evaluate(spec, alpha, gamma);
                    Cell {
                        alpha,
                        gamma,
                        value: result.map(|r| r.0).filter(|v| v.is_finite()),
                        flag: result.is_some_and(|r| r.1),
                    }
                })
                .collect()
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

pub fn write_csv<W: Write>(spec: &SweepSpec, cells: &[Cell], out: W) -> csv::Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(["alpha", "gamma", "n", "quantity", "value", "flag"])?;
    let n = spec.n.to_string();
    for c in cells {
        w.write_record([
            c.alpha.to_string().as_str(),
            &c.gamma.to_string(),
            &n,
            spec.quantity.label(),
            &c.value.map(|v| v.to_string()).unwrap_or_default(),
            if c.flag { "true" } else { "false" },
        ])?;
    }
    w.flush()?;
    Ok(())
}
