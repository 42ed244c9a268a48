use super::{csv_bytes, Outcome};
use crate::config::{named, CliResult};
use serde::{Deserialize, Serialize};
use spinergy::immersion::{
    almost_minimiser_parameters, handle_neck_distance, handle_willmore_claim, willmore_revolution, AlmostMinimiser,
    HandleProfile,
};
use spinergy::report::Check;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HandleConfig {
    pub command: Option<String>,
    /// Handle parameters `L`.
    #[serde(alias = "L")]
    pub ls: Vec<f64>,
    /// Reflect the handle across its neck plane.
    pub double: bool,
    /// Also assemble an almost-minimiser of this genus.
    pub gamma: Option<u32>,
    /// Excess budget for the almost-minimiser.
    pub eps: f64,
    /// Tolerance of the closed-form comparison.
    pub tol: f64,
}
named!(HandleConfig, "handle");

impl Default for HandleConfig {
    fn default() -> Self {
        HandleConfig {
            command: None,
            ls: vec![1.0, 5.0, 10.0, 100.0],
            double: false,
            gamma: None,
            eps: 0.01,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    #[serde(rename = "L")]
    l: f64,
    doubled: bool,
    willmore: f64,
    closed_form: f64,
    catenoid: f64,
    arc: f64,
    ray: f64,
    neck_distance: f64,
    neck_residual: f64,
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    rows: Vec<Row>,
    almost_minimiser: Option<AlmostMinimiser>,
}

pub fn run(cfg: &HandleConfig) -> CliResult<Outcome> {
    let factor = if cfg.double { 2.0 } else { 1.0 };
    let mut rows = Vec::with_capacity(cfg.ls.len());
    let mut checks = Vec::new();
    for &l in &cfg.ls {
        let w = willmore_revolution(&HandleProfile::new(l)?, cfg.double)?;
        let neck = handle_neck_distance(l)?;
        let closed_form = factor * handle_willmore_claim(l);
        checks.push(Check::new(format!("closed_form_L{l}"), (w.total - closed_form).abs(), cfg.tol * closed_form));
        checks.push(Check::new(format!("neck_identity_L{l}"), neck.residual, 1e-12));
        rows.push(Row {
            l,
            doubled: cfg.double,
            willmore: w.total,
            closed_form,
            catenoid: w.catenoid,
            arc: w.arc,
            ray: w.ray,
            neck_distance: neck.closed_form,
            neck_residual: neck.residual,
        });
    }
    let almost_minimiser = match cfg.gamma {
        Some(g) => {
            let a = almost_minimiser_parameters(g, cfg.eps)?;
            checks.push(Check::new("almost_minimiser_excess", a.energy - a.infimum, cfg.eps));
            Some(a)
        }
        None => None,
    };
    let csv = csv_bytes(&rows)?;
    let report = Report {
        command: "handle",
        rows,
        almost_minimiser,
    };
    Ok(Outcome::new(&report, &checks)?.with_artifact("handle.csv", csv))
}
