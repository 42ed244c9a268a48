//! Experiment configuration files (TOML, or JSON by extension) and shared
//! lattice/spinor selection.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use spinergy::geometry::{Lattice, SpinCharacter};
use spinergy::Vec2;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] spinergy::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Core(spinergy::Error::Config(_)) => 2,
            _ => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Implemented by every subcommand configuration.
pub trait Named {
    const COMMAND: &'static str;
    fn command(&self) -> Option<&str>;
}

/// Loads `path` (or defaults when absent). Unknown keys are rejected, and a
/// `command` key, if present, must name the running subcommand.
pub fn load<T: DeserializeOwned + Default + Named>(path: Option<&Path>) -> CliResult<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg: T = if path.extension().is_some_and(|e| e == "json") {
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
    } else {
        toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
    };
    match cfg.command() {
        Some(c) if c != T::COMMAND => Err(CliError::Config(format!(
            "config is for command '{c}', not '{}'",
            T::COMMAND
        ))),
        _ => Ok(cfg),
    }
}

macro_rules! named {
    ($t:ty, $name:literal) => {
        impl $crate::config::Named for $t {
            const COMMAND: &'static str = $name;
            fn command(&self) -> Option<&str> {
                self.command.as_deref()
            }
        }
    };
}
pub(crate) use named;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SpinorKind {
    #[default]
    Parallel,
    Saddle,
}

/// Lattice and character from optional overrides. Defaults: the unit square
/// with the trivial character for parallel spinors, `Γ_ℓ` with `χ = (−1, −1)`
/// for the saddle.
pub fn lattice_and_chi(
    kind: SpinorKind,
    ell: f64,
    gamma1: Option<[f64; 2]>,
    gamma2: Option<[f64; 2]>,
    chi: Option<[i64; 2]>,
) -> CliResult<(Lattice, SpinCharacter)> {
    let lattice = match (gamma1, gamma2) {
        (Some(a), Some(b)) => Lattice::new(Vec2::from(a), Vec2::from(b))?,
        (None, None) => match kind {
            SpinorKind::Parallel => Lattice::square(1.0)?,
            SpinorKind::Saddle => Lattice::saddle(ell)?,
        },
        _ => return Err(CliError::Config("gamma1 and gamma2 must be given together".into())),
    };
    let chi = match chi {
        Some([a, b]) => SpinCharacter::new(a, b)?,
        None => match kind {
            SpinorKind::Parallel => SpinCharacter::TRIVIAL,
            SpinorKind::Saddle => SpinCharacter::new(-1, -1)?,
        },
    };
    Ok((lattice, chi))
}

/// Worker count: `SPINERGY_THREADS` if set, otherwise the available parallelism.
pub fn threads() -> CliResult<usize> {
    match std::env::var("SPINERGY_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(CliError::Config(format!("SPINERGY_THREADS must be a positive integer, got '{v}'"))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}
