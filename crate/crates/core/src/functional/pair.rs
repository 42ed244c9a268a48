use super::spinor::SpinorField;
use crate::algebra::{clifford_mul, omega_mul, Mat2, Vec2};
use crate::error::{Error, Result};
use crate::geometry::{CovectorField, EndomorphismField, FlatMetric, Grid, QuaternionField};

/// Tolerance on `||φ| − 1|` for extracting the pair.
pub const PAIR_UNIT_TOL: f64 = 1e-10;

/// The pair `(A, β)` with `∇_X φ = A(X)·φ + β(X) ω·φ`, in frame components:
/// `A[k][i] = ⟨∇_{eᵢ}φ, eₖ·φ⟩`, `βᵢ = ⟨∇_{eᵢ}φ, ω·φ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairField {
    pub a: EndomorphismField,
    pub beta: CovectorField,
    pub metric: FlatMetric,
}

impl PairField {
    pub fn grid(&self) -> Grid {
        self.a.grid()
    }

    /// `|A|² + |β|²`, which equals `|∇φ|²` for unit `φ`.
    pub fn density(&self) -> Vec<f64> {
        self.a
            .data()
            .iter()
            .zip(self.beta.data())
            .map(|(a, b)| a.frob(*a) + b.norm_sqr())
            .collect()
    }

    /// Reassembles `[∇_{e₁}φ, ∇_{e₂}φ]` from the pair and `φ`.
    pub fn covariant_derivative(&self, phi: &SpinorField) -> [QuaternionField; 2] {
        let build = |i: usize| {
            let data = self
                .a
                .data()
                .iter()
                .zip(self.beta.data())
                .zip(phi.values())
                .map(|((a, b), &q)| clifford_mul(a.col(i), q) + omega_mul(q) * b.get(i))
                .collect();
            QuaternionField::from_vec(phi.grid(), phi.chi().signs(), data).expect("same grid")
        };
        [build(0), build(1)]
    }
}

/// Extracts `(A, β)` from a unit spinor.
pub fn pair_from_spinor(phi: &SpinorField) -> Result<PairField> {
    let dev = phi.unit_deviation();
    if !(dev <= PAIR_UNIT_TOL) {
        return Err(Error::NotUnit(dev));
    }
    let [d1, d2] = phi.nabla();
    let grid = phi.grid();
    let mut a = Vec::with_capacity(grid.len());
    let mut beta = Vec::with_capacity(grid.len());
    for ((&p, &n1), &n2) in phi.values().iter().zip(d1.data()).zip(d2.data()) {
        let (e1p, e2p, wp) = (p.left_i(), p.left_j(), p.left_k());
        a.push(Mat2::new(n1.dot(e1p), n2.dot(e1p), n1.dot(e2p), n2.dot(e2p)));
        beta.push(Vec2::new(n1.dot(wp), n2.dot(wp)));
    }
    Ok(PairField {
        a: EndomorphismField::from_vec(grid, [1.0, 1.0], a)?,
        beta: CovectorField::from_vec(grid, [1.0, 1.0], beta)?,
        metric: *phi.metric(),
    })
}
