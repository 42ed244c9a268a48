use crate::algebra::{Mat2, Quaternion};
use crate::report::Check;
use serde::Serialize;
use std::f64::consts::PI;

/// Tolerance of the closed-form sphere checks.
pub const SPHERE_TOL: f64 = 1e-12;

/// Constants of a twistor spinor, `∇_X φ = a X·φ + b J(X)·φ`, on the round
/// sphere of curvature `K = 4(a² + b²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwistorParams {
    pub a: f64,
    pub b: f64,
}

impl TwistorParams {
    pub fn curvature(&self) -> f64 {
        4.0 * (self.a * self.a + self.b * self.b)
    }

    /// `A = a·Id + b·J`.
    pub fn endomorphism(&self) -> Mat2 {
        Mat2::IDENTITY * self.a + Mat2::J * self.b
    }

    /// Image under the circle action `φ ↦ cos t φ + sin t ω·φ`. Computed in `ℍ`:
    /// `a + b k ↦ e^{tk} (a + b k) e^{tk}`, i.e. rotation of `(a, b)` by `2t`.
    pub fn circle_action(&self, t: f64) -> TwistorParams {
        let e = Quaternion::omega_exp(t);
        let q = e * Quaternion::new(self.a, 0.0, 0.0, self.b) * e;
        TwistorParams { a: q.w, b: q.z }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwistorReport {
    pub params: TwistorParams,
    pub curvature: f64,
    /// `None` when `a = b = 0`: the spinor is parallel and the surface is flat.
    pub energy: Option<f64>,
    pub verdict: &'static str,
    pub checks: Vec<Check>,
}

/// Closed-form verification for one twistor spinor: trace-free part of
/// `AᵗA + β⊗β` vanishes (`β = 0`), `2|∇φ|² = K`, `det A = K/4`,
/// `𝓔 = ½ (K/2) (4π/K) = π`, and the energy is constant on the circle orbit.
pub fn twistor_closed_form_check(params: TwistorParams) -> TwistorReport {
    let k = params.curvature();
    if k == 0.0 {
        return TwistorReport {
            params,
            curvature: 0.0,
            energy: None,
            verdict: "parallel, not sphere",
            checks: Vec::new(),
        };
    }
    let a = params.endomorphism();
    let grad_sq = a.frob(a);
    let area = 4.0 * PI / k;
    let energy = 0.5 * grad_sq * area;
    let mut checks = vec![
        Check::new("tracefree_AtA_plus_beta_beta", (a.transpose() * a).trace_free().norm(), SPHERE_TOL),
        Check::new("equality_2grad_sq_eq_K", (2.0 * grad_sq - k).abs(), SPHERE_TOL * k.max(1.0)),
        Check::new("det_A_eq_K_over_4", (a.det() - k / 4.0).abs(), SPHERE_TOL * k.max(1.0)),
        Check::new("energy_eq_pi", (energy - PI).abs(), SPHERE_TOL),
    ];
    let mut orbit = 0.0f64;
    for i in 1..=8 {
        let t = i as f64 * PI / 9.0;
        let p = params.circle_action(t);
        let a2 = p.endomorphism();
        let e2 = 0.5 * a2.frob(a2) * 4.0 * PI / p.curvature();
        orbit = orbit.max((e2 - energy).abs()).max((p.curvature() - k).abs() / k);
    }
    checks.push(Check::new("circle_orbit_energy", orbit, SPHERE_TOL));
    let verdict = if checks.iter().all(|c| c.pass) {
        "sphere critical point, energy pi"
    } else {
        "inconsistent"
    };
    TwistorReport {
        params,
        curvature: k,
        energy: Some(energy),
        verdict,
        checks,
    }
}
