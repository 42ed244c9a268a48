use super::{csv_bytes, Outcome};
use crate::config::{named, CliResult};
use serde::{Deserialize, Serialize};
use spinergy::geometry::spin_structure_count;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CountsConfig {
    pub command: Option<String>,
    pub gamma: Vec<u32>,
}
named!(CountsConfig, "counts");

impl Default for CountsConfig {
    fn default() -> Self {
        CountsConfig {
            command: None,
            gamma: vec![0, 1, 2, 3, 4],
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct Row {
    gamma: u32,
    total: u128,
    bounding: u128,
    non_bounding: u128,
}

pub fn run(cfg: &CountsConfig) -> CliResult<Outcome> {
    let rows = cfg
        .gamma
        .iter()
        .map(|&g| {
            let (t, b, nb) = spin_structure_count(g)?;
            Ok(Row {
                gamma: g,
                total: t,
                bounding: b,
                non_bounding: nb,
            })
        })
        .collect::<spinergy::Result<Vec<_>>>()?;
    let csv = csv_bytes(&rows)?;
    let report = serde_json::json!({ "command": "counts", "rows": rows });
    Ok(Outcome::new(&report, &[])?.with_artifact("counts.csv", csv))
}
