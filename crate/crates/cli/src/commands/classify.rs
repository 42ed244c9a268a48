use super::Outcome;
use crate::config::{lattice_and_chi, named, CliResult, SpinorKind};
use serde::{Deserialize, Serialize};
use spinergy::families::{build_parallel, build_saddle, classify_flat_critical, tt_predicate, SaddleParams, Verdict};
use spinergy::functional::pair_from_spinor;
use spinergy::geometry::Grid;
use spinergy::report::Check;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifyConfig {
    pub command: Option<String>,
    pub spinor: SpinorKind,
    pub ell: f64,
    pub gamma1: Option<[f64; 2]>,
    pub gamma2: Option<[f64; 2]>,
    pub chi: Option<[i64; 2]>,
    #[serde(alias = "N")]
    pub n: usize,
    /// Tolerance constant `C` in `C·h³`.
    pub constant: f64,
}
named!(ClassifyConfig, "classify");

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig {
            command: None,
            spinor: SpinorKind::Saddle,
            ell: 1.0,
            gamma1: None,
            gamma2: None,
            chi: None,
            n: 64,
            constant: spinergy::families::classify::CLASSIFY_CONSTANT,
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    spinor: SpinorKind,
    n: usize,
    tolerance: f64,
    verdict: Verdict,
    gradient_residual: f64,
    tt: bool,
}

pub fn run(cfg: &ClassifyConfig) -> CliResult<Outcome> {
    let (lattice, chi) = lattice_and_chi(cfg.spinor, cfg.ell, cfg.gamma1, cfg.gamma2, cfg.chi)?;
    let grid = Grid::new(cfg.n)?;
    let phi = match cfg.spinor {
        SpinorKind::Parallel => build_parallel(&lattice, chi, grid)?,
        SpinorKind::Saddle => build_saddle(&SaddleParams::critical(cfg.ell, 0.0)?, &lattice, chi, grid)?,
    };
    let pair = pair_from_spinor(&phi)?;
    let tol = cfg.constant * grid.h().powi(3);
    let c = classify_flat_critical(&pair, tol)?;
    let mut checks = c.checks.clone();
    checks.push(Check::new("consistent", (c.verdict == Verdict::Inconsistent) as u8 as f64, 0.0));
    let report = Report {
        command: "classify",
        spinor: cfg.spinor,
        n: cfg.n,
        tolerance: tol,
        verdict: c.verdict,
        gradient_residual: c.gradient_residual,
        tt: tt_predicate(&pair, tol),
    };
    Outcome::new(&report, &checks)
}
