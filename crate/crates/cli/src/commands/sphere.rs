use super::Outcome;
use crate::config::{named, CliResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use spinergy::families::{twistor_closed_form_check, TwistorParams, TwistorReport};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SphereConfig {
    pub command: Option<String>,
    /// Explicit twistor parameters; random draws are used when absent.
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub samples: usize,
    pub seed: u64,
}
named!(SphereConfig, "sphere");

impl Default for SphereConfig {
    fn default() -> Self {
        SphereConfig {
            command: None,
            a: None,
            b: None,
            samples: 20,
            seed: 5,
        }
    }
}

#[derive(Serialize)]
struct Report {
    command: &'static str,
    reports: Vec<TwistorReport>,
}

pub fn run(cfg: &SphereConfig) -> CliResult<Outcome> {
    let params: Vec<TwistorParams> = match (cfg.a, cfg.b) {
        (Some(a), Some(b)) => vec![TwistorParams { a, b }],
        (None, None) => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            (0..cfg.samples)
                .map(|_| loop {
                    let (a, b): (f64, f64) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                    if a.hypot(b) > 1e-3 {
                        break TwistorParams { a, b };
                    }
                })
                .collect()
        }
        _ => return Err(crate::config::CliError::Config("a and b must be given together".into())),
    };
    let reports: Vec<TwistorReport> = params.into_iter().map(twistor_closed_form_check).collect();
    let checks: Vec<_> = reports.iter().flat_map(|r| r.checks.iter().cloned()).collect();
    Outcome::new(&Report { command: "sphere", reports }, &checks)
}
