//! `spinergy`: runs the numerical experiments and writes CSV, JSON and OBJ
//! artifacts. Exit status 0 when every owned check passes, 1 when a check
//! fails or a computation is rejected, 2 for configuration errors.

mod commands;
mod config;

use clap::{Args, Parser, Subcommand};
use commands::Outcome;
use config::{load, CliResult, SpinorKind};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "spinergy", version, about = "Spinorial energy experiments on flat tori and the round sphere")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Configuration file (TOML, or JSON with a .json extension).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports and artifacts.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Refinement study of the spinor identities.
    Verify {
        /// Grid size of one refinement level (repeatable).
        #[arg(long = "n", short = 'N')]
        levels: Vec<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Saddle spinor: energy, criticality, moduli second variation, classification.
    Saddle {
        #[arg(long)]
        ell: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        c: Option<f64>,
        #[arg(long)]
        theta: Option<f64>,
        /// Spin character as two signs, e.g. `1,1`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        chi: Option<Vec<i64>>,
        #[arg(long = "n", short = 'N')]
        n: Option<usize>,
    },
    /// Negative gradient flow of the energy in the spinor slot.
    Flow {
        #[arg(long, value_enum)]
        start: Option<SpinorKind>,
        #[arg(long = "n", short = 'N')]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        energy_target: Option<f64>,
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Willmore energy and neck distance of the handle surface.
    Handle {
        /// Handle parameter (repeatable).
        #[arg(long = "L")]
        ls: Vec<f64>,
        /// Reflect the handle across its neck plane.
        #[arg(long)]
        double: bool,
        /// Also build an almost-minimiser of this genus.
        #[arg(long)]
        gamma: Option<u32>,
    },
    /// Integrate the Weierstraß form of a spinor and export an OBJ mesh.
    Weierstrass {
        #[arg(long, value_enum)]
        spinor: Option<SpinorKind>,
        #[arg(long = "n", short = 'N')]
        n: Option<usize>,
    },
    /// Classify a flat critical pair.
    Classify {
        #[arg(long, value_enum)]
        spinor: Option<SpinorKind>,
        #[arg(long = "n", short = 'N')]
        n: Option<usize>,
    },
    /// Closed-form checks for twistor spinors on the round sphere.
    Sphere {
        #[arg(long, allow_hyphen_values = true)]
        a: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Numbers of spin structures on closed surfaces.
    Counts {
        /// Genus (repeatable).
        #[arg(long)]
        gamma: Vec<u32>,
    },
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn dispatch(command: Command, cfg_path: Option<&Path>) -> CliResult<(&'static str, Outcome)> {
    Ok(match command {
        Command::Verify { levels, samples, seed } => {
            let mut cfg: commands::verify::VerifyConfig = load(cfg_path)?;
            if !levels.is_empty() {
                cfg.levels = levels;
            }
            set(&mut cfg.samples, samples);
            set(&mut cfg.seed, seed);
            ("verify", commands::verify::run(&cfg, config::threads()?)?)
        }
        Command::Saddle { ell, c, theta, chi, n } => {
            let mut cfg: commands::saddle::SaddleConfig = load(cfg_path)?;
            set(&mut cfg.ell, ell);
            set(&mut cfg.c, c);
            if theta.is_some() {
                cfg.theta = theta;
            }
            if let Some(v) = chi {
                let [a, b] = v[..] else {
                    return Err(config::CliError::Config("--chi takes two signs, e.g. 1,-1".into()));
                };
                cfg.chi = Some([a, b]);
            }
            set(&mut cfg.n, n);
            ("saddle", commands::saddle::run(&cfg)?)
        }
        Command::Flow { start, n, seed, energy_target, t_max } => {
            let mut cfg: commands::flow::FlowConfig = load(cfg_path)?;
            set(&mut cfg.start, start);
            if n.is_some() {
                cfg.n = n;
            }
            set(&mut cfg.seed, seed);
            if energy_target.is_some() {
                cfg.energy_target = energy_target;
            }
            set(&mut cfg.t_max, t_max);
            ("flow", commands::flow::run(&cfg)?)
        }
        Command::Handle { ls, double, gamma } => {
            let mut cfg: commands::handle::HandleConfig = load(cfg_path)?;
            if !ls.is_empty() {
                cfg.ls = ls;
            }
            cfg.double |= double;
            if gamma.is_some() {
                cfg.gamma = gamma;
            }
            ("handle", commands::handle::run(&cfg)?)
        }
        Command::Weierstrass { spinor, n } => {
            let mut cfg: commands::weierstrass::WeierstrassConfig = load(cfg_path)?;
            set(&mut cfg.spinor, spinor);
            set(&mut cfg.n, n);
            ("weierstrass", commands::weierstrass::run(&cfg)?)
        }
        Command::Classify { spinor, n } => {
            let mut cfg: commands::classify::ClassifyConfig = load(cfg_path)?;
            set(&mut cfg.spinor, spinor);
            set(&mut cfg.n, n);
            ("classify", commands::classify::run(&cfg)?)
        }
        Command::Sphere { a, b, seed } => {
            let mut cfg: commands::sphere::SphereConfig = load(cfg_path)?;
            if a.is_some() || b.is_some() {
                cfg.a = a;
                cfg.b = b;
            }
            set(&mut cfg.seed, seed);
            ("sphere", commands::sphere::run(&cfg)?)
        }
        Command::Counts { gamma } => {
            let mut cfg: commands::counts::CountsConfig = load(cfg_path)?;
            if !gamma.is_empty() {
                cfg.gamma = gamma;
            }
            ("counts", commands::counts::run(&cfg)?)
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Verify { .. } => "verify",
        Command::Saddle { .. } => "saddle",
        Command::Flow { .. } => "flow",
        Command::Handle { .. } => "handle",
        Command::Weierstrass { .. } => "weierstrass",
        Command::Classify { .. } => "classify",
        Command::Sphere { .. } => "sphere",
        Command::Counts { .. } => "counts",
    }
}

fn write_outputs(out: &Path, name: &str, outcome: &Outcome) -> CliResult<String> {
    for (file, bytes) in &outcome.artifacts {
        spinergy::report::write_atomic(&out.join(file), bytes)?;
    }
    let json = spinergy::report::to_json(&outcome.report)?;
    spinergy::report::write_atomic(&out.join(format!("{name}_report.json")), json.as_bytes())?;
    Ok(json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    let out = cli.common.out.clone();
    let result = dispatch(cli.command, cli.common.config.as_deref()).and_then(|(name, outcome)| {
        let json = write_outputs(&out, name, &outcome)?;
        Ok((json, outcome.pass))
    });
    match result {
        Ok((json, pass)) => {
            print!("{json}");
            ExitCode::from(if pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = e.exit_code();
            if code != 2 {
                let report = serde_json::json!({ "command": name, "error": e.to_string(), "pass": false });
                if let Ok(json) = spinergy::report::to_json(&report) {
                    let _ = spinergy::report::write_atomic(&out.join(format!("{name}_report.json")), json.as_bytes());
                    print!("{json}");
                }
            }
            ExitCode::from(code as u8)
        }
    }
}
