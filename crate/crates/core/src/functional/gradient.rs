//! Negative gradient `(Q₁, Q₂)` of the energy.
//!
//! `d/dt 𝓔(g_t, φ_t) = −∫⟨Q₁, ġ⟩ − ∫⟨Q₂, φ̇⟩`. Two independent routes are
//! provided: straight from the spinor, and through the pair `(A, β)`.

use super::pair::PairField;
use super::spinor::SpinorField;
use crate::algebra::{clifford_mul, omega_mul, wedge_mul, Mat2, Quaternion, Vec2};
use crate::geometry::{pairwise_sum, EndomorphismField, FlatMetric, QuaternionField, ScalarField};

/// `Q₁` is a symmetric endomorphism field (frame components), `Q₂` a spinor field
/// pointwise orthogonal to `φ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientPair {
    pub q1: EndomorphismField,
    pub q2: QuaternionField,
}

impl GradientPair {
    pub fn sup_norms(&self) -> (f64, f64) {
        (self.q1.sup_norm(), self.q2.sup_norm())
    }

    pub fn sup_dist(&self, other: &GradientPair) -> (f64, f64) {
        (self.q1.sup_dist(&other.q1), self.q2.sup_dist(&other.q2))
    }
}

/// Rough Laplacian `∇*∇φ = −Σᵢ ∇_{eᵢ}∇_{eᵢ}φ`, composed from first differences so
/// that it is exactly the `L²` gradient of the discrete energy.
pub fn rough_laplacian(field: &QuaternionField, nabla: &[QuaternionField; 2], metric: &FlatMetric) -> QuaternionField {
    let n11 = nabla[0].frame_derivative(&metric.frame, 0);
    let n22 = nabla[1].frame_derivative(&metric.frame, 1);
    let data = n11.data().iter().zip(n22.data()).map(|(&a, &b)| -(a + b)).collect();
    QuaternionField::from_vec(field.grid(), field.signs(), data).expect("same grid")
}

/// `Q₂ = −(∇*∇φ − ⟨∇*∇φ, φ⟩φ)` together with the discrete energy. For unit `φ`
/// this is `−∇*∇φ + |∇φ|²φ`; the projected form is the exact negative gradient
/// of the discrete energy restricted to unit spinors.
pub fn spinor_gradient_and_energy(field: &QuaternionField, metric: &FlatMetric) -> (QuaternionField, f64) {
    let nabla = field.frame_derivatives(&metric.frame);
    let lap = rough_laplacian(field, &nabla, metric);
    let q2 = lap
        .data()
        .iter()
        .zip(field.data())
        .map(|(&l, &p)| p * (l.dot(p) / p.norm_sqr().max(f64::MIN_POSITIVE)) - l)
        .collect();
    let dens: Vec<f64> = nabla[0]
        .data()
        .iter()
        .zip(nabla[1].data())
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect();
    let h = field.grid().h();
    let energy = 0.5 * pairwise_sum(&dens) * metric.density() * h * h;
    (
        QuaternionField::from_vec(field.grid(), field.signs(), q2).expect("same grid"),
        energy,
    )
}

/// `Q₁ = −¼|∇φ|² g − ¼ div T + ½⟨∇φ ⊗ ∇φ⟩`, `Q₂ = −∇*∇φ + |∇φ|²φ`, with
/// `T(X,Y,Z)` the symmetrisation in `Y, Z` of `⟨(X∧Y)·φ, ∇_Z φ⟩` and
/// `div T = −Σₖ (∇_{eₖ}T)(eₖ, ·, ·)`.
pub fn neg_gradient_general(phi: &SpinorField) -> GradientPair {
    let metric = phi.metric();
    let grid = phi.grid();
    let nabla = phi.nabla();
    let e = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];

    // T_a as a matrix field in (b, c).
    let mut t = [Vec::with_capacity(grid.len()), Vec::with_capacity(grid.len())];
    let mut rest = Vec::with_capacity(grid.len());
    for (idx, &p) in phi.values().iter().enumerate() {
        let n = [nabla[0].data()[idx], nabla[1].data()[idx]];
        let s = |a: usize, b: usize, c: usize| -> f64 {
            if a == b {
                0.0
            } else {
                wedge_mul(e[a], e[b], p).dot(n[c])
            }
        };
        for (a, ta) in t.iter_mut().enumerate() {
            let mut m = Mat2::ZERO;
            for b in 0..2 {
                for c in 0..2 {
                    m.m[b][c] = 0.5 * (s(a, b, c) + s(a, c, b));
                }
            }
            ta.push(m);
        }
        let gram = Mat2::new(n[0].dot(n[0]), n[0].dot(n[1]), n[1].dot(n[0]), n[1].dot(n[1]));
        rest.push(gram * 0.5 - Mat2::IDENTITY * (0.25 * gram.trace()));
    }
    let t1 = EndomorphismField::from_vec(grid, [1.0, 1.0], std::mem::take(&mut t[0])).expect("grid");
    let t2 = EndomorphismField::from_vec(grid, [1.0, 1.0], std::mem::take(&mut t[1])).expect("grid");
    let dt1 = t1.frame_derivative(&metric.frame, 0);
    let dt2 = t2.frame_derivative(&metric.frame, 1);
    let q1 = rest
        .iter()
        .zip(dt1.data().iter().zip(dt2.data()))
        .map(|(&r, (&a, &b))| {
            let div_t = -(a + b);
            r - div_t * 0.25
        })
        .collect();

    let lap = rough_laplacian(phi.field(), &nabla, metric);
    let q2 = lap
        .data()
        .iter()
        .zip(phi.values())
        .map(|(&l, &p)| p * l.dot(p) - l)
        .collect();
    GradientPair {
        q1: EndomorphismField::from_vec(grid, [1.0, 1.0], q1).expect("grid"),
        q2: QuaternionField::from_vec(grid, phi.chi().signs(), q2).expect("grid"),
    }
}

/// `(∇_{J·}β)` as a matrix field: row `a` is `∇_{J eₐ} β`.
pub fn nabla_j_beta(pair: &PairField) -> EndomorphismField {
    let [b1, b2] = pair.beta.frame_derivatives(&pair.metric.frame);
    b1.zip_map(&b2, |d1, d2| Mat2::new(d2.x, d2.y, -d1.x, -d1.y))
}

/// `div A` (vector field) and `div β` (function).
pub fn pair_divergences(pair: &PairField) -> (crate::geometry::CovectorField, ScalarField) {
    let a1 = pair.a.frame_derivative(&pair.metric.frame, 0);
    let a2 = pair.a.frame_derivative(&pair.metric.frame, 1);
    let div_a = a1.zip_map(&a2, |x, y| -(x.col(0) + y.col(1)));
    let b1 = pair.beta.frame_derivative(&pair.metric.frame, 0);
    let b2 = pair.beta.frame_derivative(&pair.metric.frame, 1);
    let div_b = b1.zip_map(&b2, |x, y| -(x.x + y.y));
    (div_a, div_b)
}

/// `Q₁ = −¼(∇_{J·}β)^{sym} + ½(AᵗA + β⊗β)₀`.
pub fn q1_from_pair(pair: &PairField) -> EndomorphismField {
    let m = nabla_j_beta(pair);
    let data = m
        .data()
        .iter()
        .zip(pair.a.data().iter().zip(pair.beta.data()))
        .map(|(&mj, (&a, &b))| {
            let alg = (a.transpose() * a + Mat2::outer(b, b)).trace_free();
            alg * 0.5 - mj.sym() * 0.25
        })
        .collect();
    EndomorphismField::from_vec(pair.grid(), [1.0, 1.0], data).expect("grid")
}

/// `Q₁` and `Q₂ = −(div A)·φ − (div β) ω·φ` through the pair.
pub fn neg_gradient_pair(pair: &PairField, phi: &SpinorField) -> GradientPair {
    let q1 = q1_from_pair(pair);
    let (div_a, div_b) = pair_divergences(pair);
    let q2 = phi
        .values()
        .iter()
        .zip(div_a.data().iter().zip(div_b.data()))
        .map(|(&p, (&da, &db))| -clifford_mul(da, p) - omega_mul(p) * db)
        .collect::<Vec<Quaternion>>();
    GradientPair {
        q1,
        q2: QuaternionField::from_vec(phi.grid(), phi.chi().signs(), q2).expect("grid"),
    }
}

/// Sup norms of `Q₁` and `|Q₂| = (|div A|² + (div β)²)^{1/2}`, from the pair alone.
pub fn pair_gradient_residual(pair: &PairField) -> (f64, f64) {
    let q1 = q1_from_pair(pair).sup_norm();
    let (div_a, div_b) = pair_divergences(pair);
    let q2 = div_a
        .data()
        .iter()
        .zip(div_b.data())
        .map(|(a, b)| (a.norm_sqr() + b * b).sqrt())
        .fold(0.0, f64::max);
    (q1, q2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functional::pair::pair_from_spinor;
    use crate::functional::spinor::random_unit_spinor;
    use crate::geometry::{Grid, Lattice, SpinCharacter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn q2_orthogonal_to_phi() {
        let g = Grid::new(32).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::new(Vec2::new(1.0, 0.0), Vec2::new(0.4, 0.9)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let phi = random_unit_spinor(g, SpinCharacter::new(1, -1).unwrap(), m, &mut rng);
        let q = neg_gradient_general(&phi);
        let worst = q
            .q2
            .data()
            .iter()
            .zip(phi.values())
            .map(|(a, b)| a.dot(*b).abs())
            .fold(0.0, f64::max);
        assert!(worst < 1e-10);
        let (q2, e) = spinor_gradient_and_energy(phi.field(), phi.metric());
        assert!(q2.sup_dist(&q.q2) < 1e-9);
        assert!((e - phi.energy()).abs() < 1e-12 * e.max(1.0));
    }

    #[test]
    fn q1_is_symmetric() {
        let g = Grid::new(32).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::square(1.0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi = random_unit_spinor(g, SpinCharacter::TRIVIAL, m, &mut rng);
        let q = neg_gradient_general(&phi);
        for v in q.q1.data() {
            assert!((v.m[0][1] - v.m[1][0]).abs() < 1e-10);
        }
        let p = pair_from_spinor(&phi).unwrap();
        let qp = neg_gradient_pair(&p, &phi);
        let (d1, d2) = q.sup_dist(&qp);
        assert!(d1 < 1e-6 && d2 < 1e-2, "{d1} {d2}");
    }
}
