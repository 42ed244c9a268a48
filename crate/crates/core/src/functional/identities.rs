//! Pointwise and integrated identities satisfied by unit spinors on flat tori.
//! Each function returns the sup-norm (or absolute) residual of one identity.

use super::dirac::{dirac, dirac_field};
use super::gradient::{nabla_j_beta, neg_gradient_general, neg_gradient_pair};
use super::pair::{pair_from_spinor, PairField};
use super::spinor::SpinorField;
use crate::algebra::{omega_mul, Mat2, Quaternion};
use crate::error::Result;
use crate::geometry::{pairwise_sum, star_d, ScalarField};

/// Gauss curvature recovered from the pair, `K = 4 det A − 2⋆dβ`.
pub fn curvature_from_pair(pair: &PairField) -> ScalarField {
    let sd = star_d(&pair.beta, &pair.metric);
    pair.a.zip_map(&sd, |a, s| 4.0 * a.det() - 2.0 * s)
}

/// `‖Q_general − Q_pair‖∞`, summed over both components.
pub fn two_path_gradient(phi: &SpinorField) -> Result<f64> {
    let pair = pair_from_spinor(phi)?;
    let (d1, d2) = neg_gradient_general(phi).sup_dist(&neg_gradient_pair(&pair, phi));
    Ok(d1 + d2)
}

/// `tr Q₁ − ¼⋆dβ`.
pub fn trace_q1(phi: &SpinorField) -> Result<f64> {
    let pair = pair_from_spinor(phi)?;
    let q1 = neg_gradient_general(phi).q1;
    let sd = star_d(&pair.beta, &pair.metric);
    Ok(q1.zip_map(&sd, |q, s| q.trace() - 0.25 * s).sup_norm())
}

/// `⟨D²φ, φ⟩ − |Dφ|² + ⋆dβ`.
pub fn dirac_square(phi: &SpinorField) -> Result<f64> {
    let pair = pair_from_spinor(phi)?;
    let d = dirac(phi);
    let dd = dirac_field(&d, &phi.metric().frame);
    let sd = star_d(&pair.beta, &pair.metric);
    let mut worst = 0.0f64;
    for i in 0..phi.grid().len() {
        let p = phi.values()[i];
        let r = dd.data()[i].dot(p) - d.data()[i].norm_sqr() + sd.data()[i];
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// On a flat torus (`K = 0`): `max(‖4 det A − 2⋆dβ‖∞, ‖div ∇_{J·}β‖∞)`.
pub fn curvature_identities(phi: &SpinorField) -> Result<f64> {
    let pair = pair_from_spinor(phi)?;
    let k = curvature_from_pair(&pair).sup_norm();
    let m = nabla_j_beta(&pair);
    let d1 = m.frame_derivative(&pair.metric.frame, 0);
    let d2 = m.frame_derivative(&pair.metric.frame, 1);
    // (div M)_b = −Σₐ (∇ₐM)_{ab}
    let div = d1.zip_map(&d2, |x, y| {
        crate::algebra::Vec2::new(-(x.m[0][0] + y.m[1][0]), -(x.m[0][1] + y.m[1][1]))
    });
    Ok(k.max(div.sup_norm()))
}

/// `div(A∘J) + 2 (J∘A∘J)(β^♯)`.
pub fn integrability(phi: &SpinorField) -> Result<f64> {
    let pair = pair_from_spinor(phi)?;
    let aj = pair.a.map(|a| a * Mat2::J);
    let d1 = aj.frame_derivative(&pair.metric.frame, 0);
    let d2 = aj.frame_derivative(&pair.metric.frame, 1);
    let div = d1.zip_map(&d2, |x, y| -(x.col(0) + y.col(1)));
    let rhs = pair.a.zip_map(&pair.beta, |a, b| (Mat2::J * a * Mat2::J).apply(b) * -2.0);
    Ok(div.sup_dist(&rhs))
}

/// `|∫|Dφ|² − ∫|∇φ|² − ½∫K|` with `K = 0`.
pub fn lichnerowicz(phi: &SpinorField) -> f64 {
    let d = dirac(phi);
    let [n1, n2] = phi.nabla();
    let dens: Vec<f64> = (0..phi.grid().len())
        .map(|i| d.data()[i].norm_sqr() - n1.data()[i].norm_sqr() - n2.data()[i].norm_sqr())
        .collect();
    (pairwise_sum(&dens) * phi.node_weight()).abs()
}

/// `|𝓔(c²g, φ) − 𝓔(g, φ)|`.
pub fn rescaling(phi: &SpinorField, c: f64) -> f64 {
    (phi.with_metric(phi.metric().rescaled(c)).energy() - phi.energy()).abs()
}

/// `‖ |D(aφ + bω·φ)|² − |Dφ|² ‖∞` for `a = cos t`, `b = sin t`.
pub fn circle_action(phi: &SpinorField, t: f64) -> f64 {
    let (b, a) = t.sin_cos();
    let psi = phi.with_field(phi.field().map_twisted(|q| q * a + omega_mul(q) * b));
    let d0 = dirac(phi);
    let d1 = dirac(&psi);
    d0.zip_map(&d1, |x: Quaternion, y: Quaternion| y.norm_sqr() - x.norm_sqr())
        .sup_norm()
}

/// `|𝓔(φ·c) − 𝓔(φ)|` for a unit quaternion `c`.
pub fn right_invariance(phi: &SpinorField, c: Quaternion) -> f64 {
    (phi.right_mul(c.normalize()).energy() - phi.energy()).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec2;
    use crate::functional::spinor::random_unit_spinor;
    use crate::geometry::{FlatMetric, Grid, Lattice, SpinCharacter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn sample(n: usize, seed: u64) -> SpinorField {
        let g = Grid::new(n).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::new(Vec2::new(1.0, 0.0), Vec2::new(0.3, 1.1)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        random_unit_spinor(g, SpinCharacter::new(-1, 1).unwrap(), m, &mut rng)
    }

    #[test]
    fn converging_identities_shrink() {
        let coarse = sample(32, 9);
        let fine = sample(64, 9);
        type Check = fn(&SpinorField) -> Result<f64>;
        let checks: [Check; 4] = [two_path_gradient, dirac_square, curvature_identities, integrability];
        for f in checks {
            let (a, b) = (f(&coarse).unwrap(), f(&fine).unwrap());
            assert!(b < a / 8.0, "{a} {b}");
        }
    }

    #[test]
    fn exact_identities() {
        let phi = sample(32, 4);
        assert!(trace_q1(&phi).unwrap() < 1e-9);
        assert!(lichnerowicz(&phi) < 1e-9);
        assert!(rescaling(&phi, 2.5) < 1e-10);
        assert!(circle_action(&phi, 0.7) < 1e-9);
        assert!(right_invariance(&phi, Quaternion::new(0.1, 0.7, -0.2, 0.4)) < 1e-10);
    }
}
