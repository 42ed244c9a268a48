//! Normalised negative-gradient flow `φ̇ = Q₂(φ)` in the spinor slot at a fixed
//! flat metric: classical RK4 followed by pointwise normalisation, with step
//! rejection whenever the energy would increase.

pub mod kernel;

use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::functional::{random_twisted_field, SpinorField};
use crate::geometry::pairwise_sum;
use kernel::FlowKernel;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Energy slack tolerated on an accepted step.
pub const ENERGY_SLACK: f64 = 1e-12;
/// Steps below this size abort the flow.
pub const MIN_DT: f64 = 1e-12;
/// Stability factor: `dt ≤ STABILITY · h² · λ_min(G)`.
pub const STABILITY: f64 = 0.2 / 4.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FlowState {
    pub phi: SpinorField,
    pub time: f64,
    pub energy: f64,
    /// `L²` norm of `Q₂`.
    pub grad_norm: f64,
}

impl FlowState {
    pub fn new(phi: SpinorField) -> Self {
        let mut ws = Workspace::new(&phi);
        let (energy, grad_norm) = ws.evaluate_current();
        FlowState {
            phi,
            time: 0.0,
            energy,
            grad_norm,
        }
    }
}

/// Largest admissible step for `phi`'s grid and metric.
pub fn max_stable_dt(phi: &SpinorField) -> f64 {
    let h = phi.grid().h();
    STABILITY * h * h * phi.metric().min_eigenvalue()
}

struct Workspace {
    kernel: FlowKernel,
    phi: Vec<Quaternion>,
    k: [Vec<Quaternion>; 4],
    stage: Vec<Quaternion>,
    lap: Vec<Quaternion>,
    tmp: Vec<Quaternion>,
    dots: Vec<f64>,
}

impl Workspace {
    fn new(phi: &SpinorField) -> Self {
        let kernel = FlowKernel::new(phi.grid(), phi.chi().signs(), phi.metric());
        let len = kernel.len();
        let z = || vec![Quaternion::ZERO; len];
        Workspace {
            kernel,
            phi: phi.values().to_vec(),
            k: [z(), z(), z(), z()],
            stage: z(),
            lap: z(),
            tmp: z(),
            dots: vec![0.0; len],
        }
    }

    /// Fills `k[0]` with `Q₂(phi)`; returns energy and `‖Q₂‖`.
    fn evaluate_current(&mut self) -> (f64, f64) {
        let [k0, ..] = &mut self.k;
        let e = self.kernel.gradient(&self.phi, k0, &mut self.lap, &mut self.tmp, &mut self.dots);
        let g = self.kernel.l2_norm(k0, &mut self.dots);
        (e, g)
    }

    fn stage_eval(&mut self, from: usize, into: usize, c: f64) {
        for ((s, &p), &k) in self.stage.iter_mut().zip(&self.phi).zip(&self.k[from]) {
            *s = p + k * c;
        }
        let (_, hi) = self.k.split_at_mut(into);
        self.kernel
            .gradient(&self.stage, &mut hi[0], &mut self.lap, &mut self.tmp, &mut self.dots);
    }

    /// RK4 increments into `stage` (normalised); `k[0]` must hold `Q₂(phi)`.
    fn propose(&mut self, dt: f64) {
        self.stage_eval(0, 1, 0.5 * dt);
        self.stage_eval(1, 2, 0.5 * dt);
        self.stage_eval(2, 3, dt);
        let c = dt / 6.0;
        for (i, s) in self.stage.iter_mut().enumerate() {
            let inc = self.k[0][i] + (self.k[1][i] + self.k[2][i]) * 2.0 + self.k[3][i];
            *s = (self.phi[i] + inc * c).normalize();
        }
    }

    /// Energy of `stage`, leaving `Q₂(stage)` in `k[1]`.
    fn stage_energy(&mut self) -> f64 {
        let (_, hi) = self.k.split_at_mut(1);
        self.kernel
            .gradient(&self.stage, &mut hi[0], &mut self.lap, &mut self.tmp, &mut self.dots)
    }

    /// Accepts `stage` as the new state.
    fn commit(&mut self) -> f64 {
        std::mem::swap(&mut self.phi, &mut self.stage);
        self.k.swap(0, 1);
        self.kernel.l2_norm(&self.k[0], &mut self.dots)
    }
}

/// Outcome of one attempted step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepInfo {
    pub dt: f64,
    pub rejections: usize,
}

fn step_ws(ws: &mut Workspace, energy: f64, dt: f64) -> Result<(f64, f64, StepInfo)> {
    if !(dt > 0.0) {
        return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
    }
    let mut dt = dt;
    let mut rejections = 0;
    loop {
        if dt < MIN_DT {
            return Err(Error::StepUnderflow(dt));
        }
        ws.propose(dt);
        let e = ws.stage_energy();
        if e <= energy + ENERGY_SLACK {
            let g = ws.commit();
            return Ok((e, g, StepInfo { dt, rejections }));
        }
        dt *= 0.5;
        rejections += 1;
    }
}

/// One RK4 step of size `min(dt, max_stable_dt)`, halved until the energy
/// does not increase.
pub fn step(state: &FlowState, dt: f64) -> Result<(FlowState, StepInfo)> {
    let mut ws = Workspace::new(&state.phi);
    ws.evaluate_current();
    let (energy, grad_norm, info) = step_ws(&mut ws, state.energy, dt.min(max_stable_dt(&state.phi)))?;
    let phi = state.phi.with_field(
        crate::geometry::QuaternionField::from_vec(state.phi.grid(), state.phi.chi().signs(), ws.phi)?,
    );
    Ok((
        FlowState {
            phi,
            time: state.time + info.dt,
            energy,
            grad_norm,
        },
        info,
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowParams {
    /// Requested step; capped by [`max_stable_dt`].
    pub dt0: f64,
    /// Stop once `‖Q₂‖ < tol`.
    pub tol: f64,
    pub t_max: f64,
    /// Also stop once the energy drops below this value.
    #[serde(default)]
    pub energy_target: Option<f64>,
    /// Keep every `record_every`-th accepted step in the telemetry.
    #[serde(default = "one")]
    pub record_every: usize,
}

fn one() -> usize {
    1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    Converged,
    EnergyTarget,
    MaxTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelemetryRow {
    pub time: f64,
    pub energy: f64,
    pub grad_norm: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowSummary {
    pub termination: Termination,
    pub steps: usize,
    pub rejections: usize,
    pub time: f64,
    pub initial_energy: f64,
    pub final_energy: f64,
    pub final_grad_norm: f64,
    /// Largest energy increase over an accepted step (≤ `ENERGY_SLACK`).
    pub max_energy_increase: f64,
    pub monotone: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub summary: FlowSummary,
    pub telemetry: Vec<TelemetryRow>,
    pub last: FlowState,
}

/// Iterates [`step`] until `‖Q₂‖ < tol`, the energy target is reached or the
/// time exceeds `t_max`.
pub fn run(phi0: SpinorField, params: &FlowParams) -> Result<Trajectory> {
    if !(params.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tol must be positive, got {}", params.tol)));
    }
    if !(params.dt0 > 0.0) || !(params.t_max >= 0.0) || params.record_every == 0 {
        return Err(Error::InvalidParameter("dt0 > 0, t_max >= 0 and record_every >= 1 required".into()));
    }
    let dt = params.dt0.min(max_stable_dt(&phi0));
    let mut ws = Workspace::new(&phi0);
    let (mut energy, mut grad) = ws.evaluate_current();
    let initial_energy = energy;
    let mut time = 0.0;
    let mut steps = 0;
    let mut rejections = 0;
    let mut max_inc = f64::NEG_INFINITY;
    let mut telemetry = vec![TelemetryRow {
        time,
        energy,
        grad_norm: grad,
        dt: 0.0,
    }];
    let reached = |e: f64| params.energy_target.is_some_and(|t| e < t);
    let termination = loop {
        if grad < params.tol {
            break Termination::Converged;
        }
        if reached(energy) {
            break Termination::EnergyTarget;
        }
        if time >= params.t_max {
            break Termination::MaxTime;
        }
        let (e, g, info) = step_ws(&mut ws, energy, dt.min(params.t_max - time).max(MIN_DT))?;
        max_inc = max_inc.max(e - energy);
        time += info.dt;
        energy = e;
        grad = g;
        steps += 1;
        rejections += info.rejections;
        if steps % params.record_every == 0 {
            telemetry.push(TelemetryRow {
                time,
                energy,
                grad_norm: grad,
                dt: info.dt,
            });
        }
    };
    if steps % params.record_every != 0 {
        telemetry.push(TelemetryRow {
            time,
            energy,
            grad_norm: grad,
            dt: telemetry.last().map_or(0.0, |r| r.dt),
        });
    }
    let field = crate::geometry::QuaternionField::from_vec(phi0.grid(), phi0.chi().signs(), ws.phi)?;
    let phi = phi0.with_field(field);
    let max_energy_increase = if steps == 0 { 0.0 } else { max_inc };
    Ok(Trajectory {
        summary: FlowSummary {
            termination,
            steps,
            rejections,
            time,
            initial_energy,
            final_energy: energy,
            final_grad_norm: grad,
            max_energy_increase,
            monotone: max_energy_increase <= ENERGY_SLACK,
        },
        telemetry,
        last: FlowState {
            phi,
            time,
            energy,
            grad_norm: grad,
        },
    })
}

/// `normalise(φ + ε f)` with `f` a random field of the same twist from `modes`
/// Fourier modes with frequencies `|nⱼ| ≤ 1`, scaled to sup norm one.
pub fn perturb<R: Rng>(phi: &SpinorField, amplitude: f64, modes: usize, rng: &mut R) -> SpinorField {
    let f = random_twisted_field(phi.grid(), phi.chi(), modes, 1.0, rng);
    let scale = amplitude / f.sup_norm().max(f64::MIN_POSITIVE);
    let data = phi
        .values()
        .iter()
        .zip(f.data())
        .map(|(&p, &v)| (p + v * scale).normalize())
        .collect();
    phi.with_field(crate::geometry::QuaternionField::from_vec(phi.grid(), phi.chi().signs(), data).expect("grid"))
}

/// `∫|∇η|² − ∫|∇φ|²|η|²` over `∫|η|²`: the second variation of the energy on
/// unit spinors in the direction `η ⊥ φ`, for spinors with `|∇φ|` constant.
pub fn second_variation_ratio(phi: &SpinorField, eta: &SpinorField) -> f64 {
    let [n1, n2] = phi.nabla();
    let [m1, m2] = eta.nabla();
    let len = phi.grid().len();
    let num: Vec<f64> = (0..len)
        .map(|i| {
            m1.data()[i].norm_sqr() + m2.data()[i].norm_sqr()
                - (n1.data()[i].norm_sqr() + n2.data()[i].norm_sqr()) * eta.values()[i].norm_sqr()
        })
        .collect();
    let den: Vec<f64> = eta.values().iter().map(|q| q.norm_sqr()).collect();
    pairwise_sum(&num) / pairwise_sum(&den)
}

/// Perturbs a critical spinor along `η = c − ⟨c, φ⟩φ`, choosing the constant `c`
/// among `candidates` seeded random unit quaternions to make the second
/// variation most negative. Returns the perturbed spinor and that value.
pub fn unstable_perturbation<R: Rng>(
    phi: &SpinorField,
    amplitude: f64,
    candidates: usize,
    rng: &mut R,
) -> (SpinorField, f64) {
    let mut best: Option<(SpinorField, f64)> = None;
    for _ in 0..candidates.max(1) {
        let c = Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .normalize();
        let eta = phi.with_field(phi.field().map_twisted(|p| c - p * c.dot(p)));
        let ratio = second_variation_ratio(phi, &eta);
        if best.as_ref().map_or(true, |(_, r)| ratio < *r) {
            best = Some((eta, ratio));
        }
    }
    let (eta, ratio) = best.expect("at least one candidate");
    let scale = amplitude / eta.field().sup_norm().max(f64::MIN_POSITIVE);
    let data = phi
        .values()
        .iter()
        .zip(eta.values())
        .map(|(&p, &e)| (p + e * scale).normalize())
        .collect();
    let field = crate::geometry::QuaternionField::from_vec(phi.grid(), phi.chi().signs(), data).expect("grid");
    (phi.with_field(field), ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_parallel, build_saddle, SaddleParams};
    use crate::geometry::{Grid, Lattice, SpinCharacter};
    use rand::SeedableRng;
    use std::f64::consts::PI;

    #[test]
    fn parallel_is_fixed() {
        let phi = build_parallel(&Lattice::square(1.0).unwrap(), SpinCharacter::TRIVIAL, Grid::new(16).unwrap()).unwrap();
        let s = FlowState::new(phi.clone());
        let (s2, _) = step(&s, 1e-3).unwrap();
        assert!(s2.phi.field().sup_dist(phi.field()) < 1e-13);
        let tr = run(phi, &FlowParams { dt0: 1e-3, tol: 1e-8, t_max: 1.0, energy_target: None, record_every: 1 }).unwrap();
        assert_eq!(tr.summary.steps, 0);
        assert_eq!(tr.summary.termination, Termination::Converged);
    }

    #[test]
    fn saddle_barely_moves() {
        let l = Lattice::saddle(1.0).unwrap();
        let phi = build_saddle(&SaddleParams::critical(1.0, 0.0).unwrap(), &l, SpinCharacter::new(-1, -1).unwrap(), Grid::new(32).unwrap()).unwrap();
        let tr = run(phi.clone(), &FlowParams { dt0: 1.0, tol: 1e-30, t_max: 0.05, energy_target: None, record_every: 100 }).unwrap();
        assert!(tr.last.phi.field().sup_dist(phi.field()) < 1e-9);
    }

    #[test]
    fn energy_decreases_and_dissipation_matches() {
        let g = Grid::new(32).unwrap();
        let phi = build_parallel(&Lattice::square(1.0).unwrap(), SpinCharacter::TRIVIAL, g).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let phi = perturb(&phi, 0.1, 4, &mut rng);
        let mut s = FlowState::new(phi);
        for _ in 0..50 {
            let (next, info) = step(&s, 1.0).unwrap();
            assert!(next.energy < s.energy);
            let rate = (next.energy - s.energy) / info.dt;
            let mid = 0.5 * (next.grad_norm.powi(2) + s.grad_norm.powi(2));
            assert!((rate + mid).abs() < 0.05 * mid, "{rate} {mid}");
            assert!(next.phi.unit_deviation() < 1e-15);
            s = next;
        }
    }

    #[test]
    fn unstable_direction_on_double_cover() {
        let l = Lattice::square(2.0).unwrap();
        let phi = build_saddle(&SaddleParams::critical(1.0, 0.0).unwrap(), &l, SpinCharacter::TRIVIAL, Grid::new(32).unwrap()).unwrap();
        assert!((phi.energy() - 2.0 * PI * PI).abs() < 1e-2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let (_, ratio) = unstable_perturbation(&phi, 0.05, 16, &mut rng);
        assert!(ratio < 0.0, "{ratio}");
    }

    #[test]
    fn underflow_reported() {
        let phi = build_parallel(&Lattice::square(1.0).unwrap(), SpinCharacter::TRIVIAL, Grid::new(8).unwrap()).unwrap();
        assert!(step(&FlowState::new(phi), -1.0).is_err());
    }
}
