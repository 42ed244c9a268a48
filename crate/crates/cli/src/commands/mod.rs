pub mod classify;
pub mod counts;
pub mod flow;
pub mod handle;
pub mod saddle;
pub mod sphere;
pub mod verify;
pub mod weierstrass;

use crate::config::CliResult;
use serde::Serialize;
use spinergy::report::Check;

/// Result of one subcommand: a JSON report, the files to write and the
/// overall verdict of the checks the command owns.
pub struct Outcome {
    pub report: serde_json::Value,
    pub artifacts: Vec<(String, Vec<u8>)>,
    pub pass: bool,
}

impl Outcome {
    pub fn new<T: Serialize>(report: &T, checks: &[Check]) -> CliResult<Self> {
        let mut value = serde_json::to_value(report).map_err(spinergy::Error::from)?;
        if let serde_json::Value::Object(map) = &mut value {
            map.insert("checks".into(), serde_json::to_value(checks).map_err(spinergy::Error::from)?);
            map.insert("pass".into(), spinergy::report::all_pass(checks).into());
        }
        Ok(Outcome {
            report: value,
            artifacts: Vec::new(),
            pass: spinergy::report::all_pass(checks),
        })
    }

    pub fn with_artifact(mut self, name: impl Into<String>, bytes: Vec<u8>) -> Self {
        self.artifacts.push((name.into(), bytes));
        self
    }
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> CliResult<Vec<u8>> {
    Ok(spinergy::report::to_csv(rows)?.into_bytes())
}
