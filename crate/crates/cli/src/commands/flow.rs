use super::{csv_bytes, Outcome};
use crate::config::{lattice_and_chi, named, CliResult, SpinorKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spinergy::families::{build_parallel, build_saddle, SaddleParams};
use spinergy::flow::{self, perturb, unstable_perturbation, FlowParams, FlowSummary, Termination};
use spinergy::geometry::{Grid, Lattice};
use spinergy::report::Check;
use std::f64::consts::PI;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlowConfig {
    pub command: Option<String>,
    /// Initial condition: a perturbed parallel spinor, or the saddle
    /// perturbed along its most unstable constant direction.
    pub start: SpinorKind,
    pub ell: f64,
    pub gamma1: Option<[f64; 2]>,
    pub gamma2: Option<[f64; 2]>,
    pub chi: Option<[i64; 2]>,
    #[serde(alias = "N")]
    pub n: Option<usize>,
    pub amplitude: Option<f64>,
    pub modes: usize,
    pub candidates: usize,
    pub seed: u64,
    pub dt0: f64,
    pub tol: f64,
    pub t_max: f64,
    pub energy_target: Option<f64>,
    pub record_every: usize,
}
named!(FlowConfig, "flow");

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            command: None,
            start: SpinorKind::Parallel,
            ell: 1.0,
            gamma1: None,
            gamma2: None,
            chi: None,
            n: None,
            amplitude: None,
            modes: 4,
            candidates: 16,
            seed: 1,
            dt0: 1.0,
            tol: 1e-10,
            t_max: 50.0,
            energy_target: None,
            record_every: 100,
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    start: SpinorKind,
    n: usize,
    seed: u64,
    energy_target: Option<f64>,
    second_variation_ratio: Option<f64>,
    summary: FlowSummary,
}

/// Defaults per start: parallel at `N = 128` down to `1e−8`; the saddle on the
/// double cover `2ℓ ℤ²` with trivial character at `N = 64` down to `π² − 0.01`.
pub fn run(cfg: &FlowConfig) -> CliResult<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (phi0, n, target, ratio) = match cfg.start {
        SpinorKind::Parallel => {
            let (lattice, chi) = lattice_and_chi(SpinorKind::Parallel, cfg.ell, cfg.gamma1, cfg.gamma2, cfg.chi)?;
            let n = cfg.n.unwrap_or(128);
            let phi = build_parallel(&lattice, chi, Grid::new(n)?)?;
            let phi0 = perturb(&phi, cfg.amplitude.unwrap_or(0.1), cfg.modes, &mut rng);
            (phi0, n, cfg.energy_target.or(Some(1e-8)), None)
        }
        SpinorKind::Saddle => {
            let (lattice, chi) = match (cfg.gamma1, cfg.gamma2, cfg.chi) {
                (None, None, None) => (Lattice::square(2.0 * cfg.ell)?, spinergy::geometry::SpinCharacter::TRIVIAL),
                (g1, g2, c) => lattice_and_chi(SpinorKind::Saddle, cfg.ell, g1, g2, c)?,
            };
            let n = cfg.n.unwrap_or(64);
            let phi = build_saddle(&SaddleParams::critical(cfg.ell, 0.0)?, &lattice, chi, Grid::new(n)?)?;
            let (phi0, ratio) = unstable_perturbation(&phi, cfg.amplitude.unwrap_or(0.05), cfg.candidates, &mut rng);
            (phi0, n, cfg.energy_target.or(Some(PI * PI - 0.01)), Some(ratio))
        }
    };
    let params = FlowParams {
        dt0: cfg.dt0,
        tol: cfg.tol,
        t_max: cfg.t_max,
        energy_target: target,
        record_every: cfg.record_every,
    };
    let traj = flow::run(phi0, &params)?;
    let s = &traj.summary;
    let mut checks = vec![Check::new("monotone", s.max_energy_increase.max(0.0), flow::ENERGY_SLACK)];
    if let Some(t) = target {
        let reached = s.termination == Termination::EnergyTarget;
        checks.push(Check::new("energy_target", if reached { 0.0 } else { s.final_energy - t }, 0.0));
    }
    let report = Report {
        command: "flow",
        start: cfg.start,
        n,
        seed: cfg.seed,
        energy_target: target,
        second_variation_ratio: ratio,
        summary: s.clone(),
    };
    Ok(Outcome::new(&report, &checks)?.with_artifact("flow_telemetry.csv", csv_bytes(&traj.telemetry)?))
}
