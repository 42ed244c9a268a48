use super::Outcome;
use crate::config::{lattice_and_chi, named, CliResult, SpinorKind};
use serde::{Deserialize, Serialize};
use spinergy::families::{build_parallel, build_saddle, SaddleParams};
use spinergy::geometry::Grid;
use spinergy::immersion::{mean_curvature_from_spinor, weierstrass::PROPORTIONALITY_TOL, weierstrass_integrate};
use spinergy::report::Check;
use spinergy::Quaternion;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeierstrassConfig {
    pub command: Option<String>,
    pub spinor: SpinorKind,
    pub ell: f64,
    pub gamma1: Option<[f64; 2]>,
    pub gamma2: Option<[f64; 2]>,
    pub chi: Option<[i64; 2]>,
    #[serde(alias = "N")]
    pub n: usize,
    /// Right factor `c` (normalised), applied as `φ·c`.
    pub rotation: Option<[f64; 4]>,
    /// Closedness tolerance.
    pub tol: f64,
    /// Tolerance of the period-length comparison.
    pub period_tol: f64,
}
named!(WeierstrassConfig, "weierstrass");

impl Default for WeierstrassConfig {
    fn default() -> Self {
        WeierstrassConfig {
            command: None,
            spinor: SpinorKind::Parallel,
            ell: 1.0,
            gamma1: None,
            gamma2: None,
            chi: None,
            n: 64,
            rotation: None,
            tol: 1e-10,
            period_tol: 1e-10,
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    spinor: SpinorKind,
    n: usize,
    lattice_lengths: [f64; 2],
    periods: [[f64; 3]; 2],
    periods_alt: [[f64; 3]; 2],
    period_lengths: [f64; 2],
    closedness_residual: f64,
    isometry_residual: f64,
    path_residual: f64,
    mean_curvature_residual: f64,
    constant_mean_curvature: bool,
}

pub fn run(cfg: &WeierstrassConfig) -> CliResult<Outcome> {
    let (lattice, chi) = lattice_and_chi(cfg.spinor, cfg.ell, cfg.gamma1, cfg.gamma2, cfg.chi)?;
    let grid = Grid::new(cfg.n)?;
    let mut phi = match cfg.spinor {
        SpinorKind::Parallel => build_parallel(&lattice, chi, grid)?,
        SpinorKind::Saddle => build_saddle(&SaddleParams::critical(cfg.ell, 0.0)?, &lattice, chi, grid)?,
    };
    if let Some([w, x, y, z]) = cfg.rotation {
        let c = Quaternion::new(w, x, y, z);
        if !(c.norm() > 0.0) {
            return Err(crate::config::CliError::Config("rotation must be a nonzero quaternion".into()));
        }
        phi = phi.right_mul(c);
    }
    let mc = mean_curvature_from_spinor(&phi, PROPORTIONALITY_TOL);
    let r = weierstrass_integrate(&phi, cfg.tol)?;
    let lengths = r.period_lengths();
    let lattice_lengths = [lattice.generator(0).norm(), lattice.generator(1).norm()];
    let checks = vec![
        Check::new("closedness", r.closedness_residual, cfg.tol),
        Check::new("isometry", r.isometry_residual, 1e-12),
        Check::new("period_path_independence", r.path_residual, cfg.tol.max(1e-12)),
        Check::new(
            "period_lengths",
            (lengths[0] - lattice_lengths[0]).abs().max((lengths[1] - lattice_lengths[1]).abs()),
            cfg.period_tol,
        ),
    ];
    let obj = r.to_obj().into_bytes();
    let report = Report {
        command: "weierstrass",
        spinor: cfg.spinor,
        n: cfg.n,
        lattice_lengths,
        periods: r.periods,
        periods_alt: r.periods_alt,
        period_lengths: lengths,
        closedness_residual: r.closedness_residual,
        isometry_residual: r.isometry_residual,
        path_residual: r.path_residual,
        mean_curvature_residual: mc.residual,
        constant_mean_curvature: mc.verdict,
    };
    Ok(Outcome::new(&report, &checks)?.with_artifact("weierstrass.obj", obj))
}
