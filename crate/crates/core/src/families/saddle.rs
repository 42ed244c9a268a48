use crate::algebra::{Quaternion, Vec2};
use crate::error::{Error, Result};
use crate::functional::SpinorField;
use crate::geometry::{FlatMetric, Grid, Lattice, SpinCharacter};
use crate::numerics::second_derivative;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_4, PI};

/// Tolerance on `αᵢ(γⱼ)/π` being an integer of the right parity.
pub const DESCENT_TOL: f64 = 1e-9;

/// `φ(x) = cos θ e^{α₁(x)ω}·1 + sin θ e^{α₂(x)ω}·j` on the plane, with constant
/// covectors `α₁, α₂` in physical coordinates. `c` is the slope `θ′` used by the
/// moduli curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaddleParams {
    pub ell: f64,
    pub theta: f64,
    pub c: f64,
    pub alpha1: Vec2,
    pub alpha2: Vec2,
}

impl SaddleParams {
    /// Critical member: `θ = π/4`, `α₁ = (π/ℓ) e¹`, `α₂ = (π/ℓ) e²`.
    pub fn critical(ell: f64, c: f64) -> Result<Self> {
        if !(ell > 0.0) || !ell.is_finite() {
            return Err(Error::InvalidParameter(format!("ell must be positive, got {ell}")));
        }
        Ok(SaddleParams {
            ell,
            theta: FRAC_PI_4,
            c,
            alpha1: Vec2::new(PI / ell, 0.0),
            alpha2: Vec2::new(0.0, PI / ell),
        })
    }

    pub fn with_theta(self, theta: f64) -> Self {
        SaddleParams { theta, ..self }
    }

    /// Residuals of `α₁ ⊥ α₂`, `|α₁| = |α₂| = π/ℓ` and `θ − π/4 ∈ (π/2)ℤ`.
    pub fn criticality_defect(&self) -> f64 {
        let k = PI / self.ell;
        let q = (self.theta - FRAC_PI_4) / (PI / 2.0);
        [
            self.alpha1.dot(self.alpha2).abs(),
            (self.alpha1.norm() - k).abs(),
            (self.alpha2.norm() - k).abs(),
            (q - q.round()).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Value of the spinor at the physical point `x`.
    pub fn value(&self, x: Vec2) -> Quaternion {
        let (s, c) = self.theta.sin_cos();
        Quaternion::omega_exp(self.alpha1.dot(x)) * c + Quaternion::omega_exp(self.alpha2.dot(x)) * Quaternion::J * s
    }

    /// `β = cos²θ α₁ + sin²θ α₂`.
    pub fn beta(&self) -> Vec2 {
        let (s, c) = self.theta.sin_cos();
        self.alpha1 * (c * c) + self.alpha2 * (s * s)
    }

    /// `½ (cos²θ|α₁|² + sin²θ|α₂|²) · area`.
    pub fn energy(&self, lattice: &Lattice) -> f64 {
        let (s, c) = self.theta.sin_cos();
        0.5 * (c * c * self.alpha1.norm_sqr() + s * s * self.alpha2.norm_sqr()) * lattice.area()
    }
}

/// Checks `e^{αᵢ(γⱼ)ω} = χ(γⱼ)` for both covectors and both generators.
pub fn check_descent(params: &SaddleParams, lattice: &Lattice, chi: SpinCharacter) -> Result<()> {
    for j in 0..2 {
        let g = lattice.generator(j);
        for alpha in [params.alpha1, params.alpha2] {
            let phase = alpha.dot(g);
            let m = phase / PI;
            let want_odd = chi.chi[j] == -1;
            let ok = (m - m.round()).abs() < DESCENT_TOL && ((m.round() as i64).rem_euclid(2) == 1) == want_odd;
            if !ok {
                return Err(Error::Descent {
                    generator: j + 1,
                    phase,
                    chi: chi.chi[j],
                });
            }
        }
    }
    Ok(())
}

/// `max_x |φ(x + γⱼ) − χ(γⱼ)φ(x)|` over a few sample points, per generator.
pub fn seam_mismatch(params: &SaddleParams, lattice: &Lattice, chi: SpinCharacter) -> [f64; 2] {
    let samples = [Vec2::new(0.0, 0.0), Vec2::new(0.31, -0.17), Vec2::new(-0.6, 0.45), Vec2::new(0.12, 0.93)];
    let mut out = [0.0; 2];
    for (j, o) in out.iter_mut().enumerate() {
        let g = lattice.generator(j);
        for &x in &samples {
            let d = params.value(x + g) - params.value(x) * chi.sign(j);
            *o = f64::max(*o, d.norm());
        }
    }
    out
}

/// Samples the saddle ansatz on `grid`, after checking that it descends to the
/// torus `ℝ²/Γ` with spin structure `chi`.
pub fn build_saddle(params: &SaddleParams, lattice: &Lattice, chi: SpinCharacter, grid: Grid) -> Result<SpinorField> {
    check_descent(params, lattice, chi)?;
    let metric = FlatMetric::from_lattice(lattice);
    SpinorField::from_fn(grid, chi, metric, |s| params.value(lattice.position(s)))
}

/// The constant spinor `1`; only the trivial character admits it.
pub fn build_parallel(lattice: &Lattice, chi: SpinCharacter, grid: Grid) -> Result<SpinorField> {
    if !chi.is_trivial() {
        return Err(Error::InvalidParameter(
            "parallel spinors require the non-bounding structure".into(),
        ));
    }
    SpinorField::constant(grid, FlatMetric::from_lattice(lattice), Quaternion::ONE)
}

/// `f(t) = cos²θ(t)/(1+t)² + sin²θ(t)(1+t)²` with `θ(t) = θ₀ + ct`.
pub fn moduli_f(theta0: f64, c: f64, t: f64) -> f64 {
    let (s, co) = (theta0 + c * t).sin_cos();
    let a = 1.0 + t;
    co * co / (a * a) + s * s * a * a
}

/// Closed form `f″(0) = 8c + 4` at `θ₀ = π/4`.
pub fn moduli_f_second_derivative(c: f64) -> f64 {
    8.0 * c + 4.0
}

/// One point of the moduli curve: the closed form `f(t)` and the discrete
/// energy of the saddle with `θ(t)` under the deformed metric `G_t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModuliPoint {
    pub t: f64,
    pub f_closed: f64,
    pub energy: f64,
}

/// Evaluates the curve on `Γ_ℓ` with `χ = (−1, −1)`. The spinor is sampled
/// once in lattice coordinates and measured in `G_t`.
pub fn moduli_energy_curve(params: &SaddleParams, grid: Grid, t: f64) -> Result<ModuliPoint> {
    if !(t.abs() < 1.0) {
        return Err(Error::InvalidParameter(format!("|t| must be < 1, got {t}")));
    }
    let lattice = Lattice::saddle(params.ell)?;
    let chi = SpinCharacter::new(-1, -1)?;
    let p = params.with_theta(params.theta + params.c * t);
    let phi = build_saddle(&p, &lattice, chi, grid)?;
    let metric = phi.metric().deformed(t)?;
    Ok(ModuliPoint {
        t,
        f_closed: moduli_f(params.theta, params.c, t),
        energy: phi.with_metric(metric).energy(),
    })
}

/// Finite-difference `f″(0)` (steps `1e-2`, `1e-3`, one Richardson step) from
/// the closed form and from the discrete energy divided by `π²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecondVariation {
    pub c: f64,
    pub expected: f64,
    pub closed_fd: f64,
    pub discrete_fd: f64,
}

pub const SECOND_VARIATION_STEPS: (f64, f64) = (1e-2, 1e-3);

pub fn second_variation(params: &SaddleParams, grid: Grid) -> Result<SecondVariation> {
    let (h1, h2) = SECOND_VARIATION_STEPS;
    let closed_fd = second_derivative(|t| moduli_f(params.theta, params.c, t), h1, h2);
    // evaluate the five discrete energies up front so errors propagate
    let mut vals = Vec::with_capacity(5);
    for t in [-h1, -h2, 0.0, h2, h1] {
        vals.push((t, moduli_energy_curve(params, grid, t)?.energy / (PI * PI)));
    }
    let lookup = |t: f64| {
        vals.iter()
            .find(|(s, _)| *s == t)
            .map(|(_, v)| *v)
            .expect("sampled point")
    };
    let discrete_fd = second_derivative(lookup, h1, h2);
    Ok(SecondVariation {
        c: params.c,
        expected: moduli_f_second_derivative(params.c),
        closed_fd,
        discrete_fd,
    })
}
