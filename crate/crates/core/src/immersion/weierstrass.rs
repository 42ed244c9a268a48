//! Spinorial Weierstraß representation: a unit spinor `φ` gives the
//! `Im ℍ`-valued one-form `ξ(X) = φ̄·(JX)·φ`, isometric and invariant under
//! `φ ↦ −φ`. Its exterior derivative is `dξ(e₁, e₂) = 2 Im(φ̄ Dφ)`, so `ξ`
//! integrates to a conformal immersion exactly when `Dφ = Hφ` with `H` real.

use crate::algebra::{clifford_mul, Quaternion, Vec2};
use crate::error::{Error, Result};
use crate::functional::{dirac, SpinorField};
use crate::geometry::{QuaternionField, ScalarField};
use serde::Serialize;
use std::fmt::Write as _;

/// Default closedness tolerance of [`weierstrass_integrate`].
pub const CLOSEDNESS_TOL: f64 = 1e-8;
/// Default tolerance of the proportionality test in [`mean_curvature_from_spinor`].
pub const PROPORTIONALITY_TOL: f64 = 1e-6;

const PERIODIC: [f64; 2] = [1.0, 1.0];

/// `[ξ(e₁), ξ(e₂)]` in the orthonormal frame.
pub fn weierstrass_form(phi: &SpinorField) -> [QuaternionField; 2] {
    let grid = phi.grid();
    let form = |x: Vec2| {
        let data = phi.values().iter().map(|&p| p.conj() * clifford_mul(x.rot(), p)).collect();
        QuaternionField::from_vec(grid, PERIODIC, data).expect("grid")
    };
    [form(Vec2::new(1.0, 0.0)), form(Vec2::new(0.0, 1.0))]
}

/// `[ξ(∂_{s₁}), ξ(∂_{s₂})]` in lattice coordinates.
pub fn lattice_components(phi: &SpinorField) -> Result<[QuaternionField; 2]> {
    let [x1, x2] = weierstrass_form(phi);
    let einv = phi.metric().frame.inverse().ok_or(Error::NotPositiveDefinite)?.m;
    let comp = |j: usize| x1.zip_map(&x2, |a, b| a * einv[0][j] + b * einv[1][j]);
    Ok([comp(0), comp(1)])
}

/// `sup |e₁ ξ(e₂) − e₂ ξ(e₁)|`.
pub fn closedness_residual(phi: &SpinorField) -> f64 {
    let [x1, x2] = weierstrass_form(phi);
    let frame = &phi.metric().frame;
    let d1x2 = x2.frame_derivative(frame, 0);
    let d2x1 = x1.frame_derivative(frame, 1);
    d1x2.sup_dist(&d2x1)
}

/// `sup ||ξ(eᵢ)| − 1|` together with `sup |⟨ξ(e₁), ξ(e₂)⟩|`.
pub fn isometry_residual(phi: &SpinorField) -> f64 {
    let [x1, x2] = weierstrass_form(phi);
    x1.data()
        .iter()
        .zip(x2.data())
        .map(|(a, b)| (a.norm() - 1.0).abs().max((b.norm() - 1.0).abs()).max(a.dot(*b).abs()))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ImmersionResult {
    pub n: usize,
    /// `F` at node `a·N + b`, with `F(0) = 0`.
    pub points: Vec<[f64; 3]>,
    /// `P(γ₁)`, `P(γ₂)` integrated along `s₂ = 0`, `s₁ = 0`.
    pub periods: [[f64; 3]; 2],
    /// The same periods along the parallel loops through `s = ½`.
    pub periods_alt: [[f64; 3]; 2],
    pub closedness_residual: f64,
    pub isometry_residual: f64,
    pub path_residual: f64,
    /// Orientation of the lattice basis; negative faces are flipped in the mesh.
    pub orientation: f64,
}

impl ImmersionResult {
    pub fn period_lengths(&self) -> [f64; 2] {
        self.periods.map(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt())
    }

    /// Wavefront OBJ of the fundamental domain: one vertex per node and two
    /// triangles per interior cell, counter-clockwise in the oriented domain.
    pub fn to_obj(&self) -> String {
        let n = self.n;
        let mut s = String::with_capacity(64 * n * n);
        let fmt = |v: f64| if v == 0.0 { 0.0 } else { v };
        for p in &self.points {
            let _ = writeln!(s, "v {:.8e} {:.8e} {:.8e}", fmt(p[0]), fmt(p[1]), fmt(p[2]));
        }
        let id = |a: usize, b: usize| a * n + b + 1;
        for a in 0..n.saturating_sub(1) {
            for b in 0..n - 1 {
                let (v00, v10, v11, v01) = (id(a, b), id(a + 1, b), id(a + 1, b + 1), id(a, b + 1));
                if self.orientation >= 0.0 {
                    let _ = writeln!(s, "f {v00} {v10} {v11}");
                    let _ = writeln!(s, "f {v00} {v11} {v01}");
                } else {
                    let _ = writeln!(s, "f {v00} {v11} {v10}");
                    let _ = writeln!(s, "f {v00} {v01} {v11}");
                }
            }
        }
        s
    }
}

/// Fourth-order increments `∫_{s_k}^{s_{k+1}} f` of a periodic sample.
fn increments(f: &[Quaternion], h: f64) -> Vec<Quaternion> {
    let n = f.len();
    (0..n)
        .map(|k| {
            let at = |o: isize| f[(k as isize + o).rem_euclid(n as isize) as usize];
            (at(0) * 13.0 + at(1) * 13.0 - at(-1) - at(2)) * (h / 24.0)
        })
        .collect()
}

fn loop_sum(values: impl Iterator<Item = Quaternion>, h: f64) -> [f64; 3] {
    let s = values.fold(Quaternion::ZERO, |acc, q| acc + q) * h;
    s.imag()
}

/// Integrates `ξ` from the origin node, first along `s₁` at `s₂ = 0`, then
/// along `s₂`. Fails with [`Error::NotIntegrable`] if the closedness
/// residual exceeds `tol`.
pub fn weierstrass_integrate(phi: &SpinorField, tol: f64) -> Result<ImmersionResult> {
    let closedness = closedness_residual(phi);
    if !(closedness <= tol) {
        return Err(Error::NotIntegrable { residual: closedness, tol });
    }
    let grid = phi.grid();
    let (n, h) = (grid.n(), grid.h());
    let [c1, c2] = lattice_components(phi)?;
    let column = |f: &QuaternionField, b: usize| (0..n).map(|a| f.at(a, b)).collect::<Vec<_>>();
    let row = |f: &QuaternionField, a: usize| (0..n).map(|b| f.at(a, b)).collect::<Vec<_>>();

    let mut points = vec![[0.0; 3]; n * n];
    let mut base = Quaternion::ZERO;
    let inc1 = increments(&column(&c1, 0), h);
    for a in 0..n {
        let mut f = base;
        let inc2 = increments(&row(&c2, a), h);
        for b in 0..n {
            points[grid.index(a, b)] = f.imag();
            f += inc2[b];
        }
        base += inc1[a];
    }
    let half = n / 2;
    let periods = [loop_sum(column(&c1, 0).into_iter(), h), loop_sum(row(&c2, 0).into_iter(), h)];
    let periods_alt = [loop_sum(column(&c1, half).into_iter(), h), loop_sum(row(&c2, half).into_iter(), h)];
    let path_residual = periods
        .iter()
        .flatten()
        .zip(periods_alt.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ImmersionResult {
        n,
        points,
        periods,
        periods_alt,
        closedness_residual: closedness,
        isometry_residual: isometry_residual(phi),
        path_residual,
        orientation: phi.metric().frame.det().signum(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanCurvature {
    /// `H = ⟨Dφ, φ⟩`.
    pub h: ScalarField,
    /// `sup |Dφ − Hφ|`.
    pub residual: f64,
    /// Whether `Dφ = Hφ` holds within the tolerance.
    pub verdict: bool,
}

/// Tests `Dφ = Hφ` pointwise with real `H`.
pub fn mean_curvature_from_spinor(phi: &SpinorField, tol: f64) -> MeanCurvature {
    let d = dirac(phi);
    let h = d.zip_map(phi.field(), |dp, p| dp.dot(p)).with_signs(PERIODIC);
    let residual = d
        .data()
        .iter()
        .zip(phi.values())
        .zip(h.data())
        .map(|((&dp, &p), &hv)| (dp - p * hv).norm())
        .fold(0.0, f64::max);
    MeanCurvature {
        h,
        residual,
        verdict: residual <= tol,
    }
}
