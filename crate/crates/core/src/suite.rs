//! Refinement study of the spinor identities over random smooth unit spinors.

use crate::error::{Error, Result};
use crate::functional::{identities, random_unit_spinor, SpinorField};
use crate::geometry::{FlatMetric, Grid, Lattice, SpinCharacter};
use crate::numerics::observed_order;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Residuals below this count as exact to rounding.
pub const EXACTNESS_FLOOR: f64 = 1e-9;
/// Minimum observed order for identities with a discretisation error.
pub const MIN_ORDER: f64 = 2.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// General and pair formulas for the negative gradient agree.
    TwoPath,
    /// `tr Q₁ = ¼⋆dβ`.
    TraceQ1,
    /// `⟨D²φ, φ⟩ = |Dφ|² − ⋆dβ`.
    DiracSquare,
    /// `4 det A − 2⋆dβ = K = 0` and `div ∇_{J·}β = 0`.
    Curvature,
    /// `div(A∘J) = −2(J∘A∘J)(β^♯)`.
    Integrability,
    /// `∫|Dφ|² = ∫|∇φ|² + ½∫K`.
    Lichnerowicz,
    /// `|D(cos t φ + sin t ωφ)| = |Dφ|`.
    CircleAction,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::TwoPath,
        Identity::TraceQ1,
        Identity::DiracSquare,
        Identity::Curvature,
        Identity::Integrability,
        Identity::Lichnerowicz,
        Identity::CircleAction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::TwoPath => "two_path",
            Identity::TraceQ1 => "trace_q1",
            Identity::DiracSquare => "dirac_square",
            Identity::Curvature => "curvature",
            Identity::Integrability => "integrability",
            Identity::Lichnerowicz => "lichnerowicz",
            Identity::CircleAction => "circle_action",
        }
    }

    pub fn residual(self, phi: &SpinorField) -> Result<f64> {
        match self {
            Identity::TwoPath => identities::two_path_gradient(phi),
            Identity::TraceQ1 => identities::trace_q1(phi),
            Identity::DiracSquare => identities::dirac_square(phi),
            Identity::Curvature => identities::curvature_identities(phi),
            Identity::Integrability => identities::integrability(phi),
            Identity::Lichnerowicz => Ok(identities::lichnerowicz(phi)),
            Identity::CircleAction => Ok(identities::circle_action(phi, 0.7)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteParams {
    pub levels: Vec<usize>,
    /// Random spinors per spin structure.
    pub samples: usize,
    pub seed: u64,
    pub gamma1: [f64; 2],
    pub gamma2: [f64; 2],
}

impl Default for SuiteParams {
    fn default() -> Self {
        SuiteParams {
            levels: vec![32, 64, 128, 256],
            samples: 50,
            seed: 2024,
            gamma1: [1.0, 0.0],
            gamma2: [0.3, 1.1],
        }
    }
}

/// One CSV row: worst residual over all samples at one grid size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub residual: f64,
    /// Order against the previous level, empty on the first.
    pub observed_order: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PassRule {
    Exact,
    Convergent,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityTable {
    pub identity: Identity,
    pub rows: Vec<LevelRow>,
    pub rule: PassRule,
}

impl IdentityTable {
    pub fn pass(&self) -> bool {
        self.rule != PassRule::Failed
    }

    pub fn finest_residual(&self) -> f64 {
        self.rows.last().map_or(f64::NAN, |r| r.residual)
    }

    pub fn min_order(&self) -> f64 {
        self.rows
            .iter()
            .filter_map(|r| r.observed_order)
            .fold(f64::INFINITY, f64::min)
    }
}

fn classify(rows: &[LevelRow]) -> PassRule {
    if rows.iter().all(|r| r.residual < EXACTNESS_FLOOR) {
        PassRule::Exact
    } else if rows.iter().all(|r| r.observed_order.is_none_or(|o| o >= MIN_ORDER)) {
        PassRule::Convergent
    } else {
        PassRule::Failed
    }
}

/// Seed of sample `k` in structure `c`; identical across grid levels so that
/// every level sees the same continuum spinor.
fn sample_seed(seed: u64, c: usize, k: usize) -> u64 {
    seed ^ ((c as u64) << 48) ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn worst_at_level(params: &SuiteParams, metric: FlatMetric, n: usize, threads: usize) -> Result<Vec<f64>> {
    let grid = Grid::new(n)?;
    let jobs: Vec<(usize, usize)> = (0..4).flat_map(|c| (0..params.samples).map(move |k| (c, k))).collect();
    let chunk = jobs.len().div_ceil(threads.max(1)).max(1);
    let run = |part: &[(usize, usize)]| -> Result<Vec<f64>> {
        let mut worst = vec![0.0f64; Identity::ALL.len()];
        for &(c, k) in part {
            let chi = SpinCharacter::all()[c];
            let mut rng = ChaCha8Rng::seed_from_u64(sample_seed(params.seed, c, k));
            let phi = random_unit_spinor(grid, chi, metric, &mut rng);
            for (w, id) in worst.iter_mut().zip(Identity::ALL) {
                *w = w.max(id.residual(&phi)?);
            }
        }
        Ok(worst)
    };
    let parts: Vec<Result<Vec<f64>>> = std::thread::scope(|s| {
        let handles: Vec<_> = jobs.chunks(chunk).map(|p| s.spawn(move || run(p))).collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut worst = vec![0.0f64; Identity::ALL.len()];
    for p in parts {
        for (w, v) in worst.iter_mut().zip(p?) {
            *w = w.max(v);
        }
    }
    Ok(worst)
}

/// Runs every identity on `samples` spinors per spin structure at each level.
pub fn run_suite(params: &SuiteParams, threads: usize) -> Result<Vec<IdentityTable>> {
    if params.levels.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "insufficient refinement levels: {} given, at least 3 needed",
            params.levels.len()
        )));
    }
    if params.levels.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidParameter("refinement levels must increase".into()));
    }
    if params.samples == 0 {
        return Err(Error::InvalidParameter("samples must be positive".into()));
    }
    let lattice = Lattice::new(params.gamma1.into(), params.gamma2.into())?;
    let metric = FlatMetric::from_lattice(&lattice);
    let mut per_level = Vec::with_capacity(params.levels.len());
    for &n in &params.levels {
        per_level.push(worst_at_level(params, metric, n, threads)?);
    }
    Ok(Identity::ALL
        .iter()
        .enumerate()
        .map(|(i, &identity)| {
            let rows: Vec<LevelRow> = params
                .levels
                .iter()
                .enumerate()
                .map(|(l, &n)| LevelRow {
                    n,
                    residual: per_level[l][i],
                    observed_order: (l > 0)
                        .then(|| observed_order(per_level[l - 1][i], params.levels[l - 1], per_level[l][i], n)),
                })
                .collect();
            IdentityTable {
                identity,
                rule: classify(&rows),
                rows,
            }
        })
        .collect())
}
