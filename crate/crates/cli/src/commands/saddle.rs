use super::Outcome;
use crate::config::{lattice_and_chi, named, CliResult, SpinorKind};
use serde::{Deserialize, Serialize};
use spinergy::families::classify::default_tolerance;
use spinergy::families::{build_saddle, classify_flat_critical, second_variation, SaddleParams, SecondVariation};
use spinergy::functional::{neg_gradient_general, pair_from_spinor};
use spinergy::geometry::Grid;
use spinergy::report::Check;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SaddleConfig {
    pub command: Option<String>,
    pub ell: f64,
    /// Rate `θ′(0)` of the moduli family.
    pub c: f64,
    /// Mixing angle; the critical value `π/4` when absent.
    pub theta: Option<f64>,
    pub gamma1: Option<[f64; 2]>,
    pub gamma2: Option<[f64; 2]>,
    pub chi: Option<[i64; 2]>,
    #[serde(alias = "N")]
    pub n: usize,
    pub energy_tol: f64,
    pub second_variation_tol: f64,
    pub discrete_tol: f64,
}
named!(SaddleConfig, "saddle");

impl Default for SaddleConfig {
    fn default() -> Self {
        SaddleConfig {
            command: None,
            ell: 1.0,
            c: 0.0,
            theta: None,
            gamma1: None,
            gamma2: None,
            chi: None,
            n: 256,
            energy_tol: 1e-6,
            second_variation_tol: 1e-6,
            discrete_tol: 1e-4,
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    n: usize,
    params: SaddleParams,
    energy: f64,
    expected_energy: f64,
    q1_sup: f64,
    q2_sup: f64,
    second_variation: SecondVariation,
    classification: serde_json::Value,
}

pub fn run(cfg: &SaddleConfig) -> CliResult<Outcome> {
    let mut params = SaddleParams::critical(cfg.ell, cfg.c)?;
    if let Some(t) = cfg.theta {
        params = params.with_theta(t);
    }
    let (lattice, chi) = lattice_and_chi(SpinorKind::Saddle, cfg.ell, cfg.gamma1, cfg.gamma2, cfg.chi)?;
    let grid = Grid::new(cfg.n)?;
    let phi = build_saddle(&params, &lattice, chi, grid)?;
    let energy = phi.energy();
    let expected = params.energy(&lattice);
    let (q1, q2) = neg_gradient_general(&phi).sup_norms();
    let sv = second_variation(&params, grid)?;
    let pair = pair_from_spinor(&phi)?;
    let tol = default_tolerance(&pair);
    let mut checks = vec![
        Check::new("energy", (energy - expected).abs(), cfg.energy_tol),
        Check::new("criticality", q1 + q2, tol),
        Check::new("second_variation_closed", (sv.closed_fd - sv.expected).abs(), cfg.second_variation_tol),
        Check::new("second_variation_discrete", (sv.discrete_fd - sv.expected).abs(), cfg.discrete_tol),
    ];
    let classification = match classify_flat_critical(&pair, tol) {
        Ok(c) => {
            checks.extend(c.checks.iter().cloned());
            serde_json::to_value(&c).map_err(spinergy::Error::from)?
        }
        Err(e) => serde_json::json!({ "error": e.to_string() }),
    };
    let report = Report {
        command: "saddle",
        n: cfg.n,
        params,
        energy,
        expected_energy: expected,
        q1_sup: q1,
        q2_sup: q2,
        second_variation: sv,
        classification,
    };
    Outcome::new(&report, &checks)
}
