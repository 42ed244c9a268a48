use super::pair::PairField;
use super::spinor::SpinorField;
use crate::algebra::{clifford_mul, omega_mul, Mat2, Vec2};
use crate::geometry::QuaternionField;

/// `Dφ = e₁·∇_{e₁}φ + e₂·∇_{e₂}φ`.
pub fn dirac_field(field: &QuaternionField, frame: &Mat2) -> QuaternionField {
    let [n1, n2] = field.frame_derivatives(frame);
    n1.zip_map(&n2, |a, b| a.left_i() + b.left_j()).with_signs(field.signs())
}

/// Dirac operator applied to a spinor.
pub fn dirac(phi: &SpinorField) -> QuaternionField {
    dirac_field(phi.field(), &phi.metric().frame)
}

/// Dirac operator through the pair:
/// `Dφ = −tr A · φ − tr(A∘J) · ω·φ + (β∘J)^♯ · φ`.
pub fn dirac_from_pair(pair: &PairField, phi: &SpinorField) -> QuaternionField {
    let data = phi
        .values()
        .iter()
        .zip(pair.a.data().iter().zip(pair.beta.data()))
        .map(|(&p, (&a, &b))| {
            let bj = Vec2::new(b.y, -b.x);
            p * (-a.trace()) - omega_mul(p) * (a * Mat2::J).trace() + clifford_mul(bj, p)
        })
        .collect();
    QuaternionField::from_vec(phi.grid(), phi.chi().signs(), data).expect("grid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Quaternion;
    use crate::functional::pair::pair_from_spinor;
    use crate::functional::spinor::random_unit_spinor;
    use crate::geometry::{FlatMetric, Grid, Lattice, SpinCharacter};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn parallel_spinor_is_harmonic() {
        let g = Grid::new(16).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::square(1.0).unwrap());
        let phi = SpinorField::constant(g, m, Quaternion::ONE).unwrap();
        assert_eq!(dirac(&phi).sup_norm(), 0.0);
    }

    #[test]
    fn single_wave() {
        // φ = e^{α(x)ω}, α = π dx on the unit square with χ = (−1, 1): ∇φ = α ⊗ ω·φ,
        // so Dφ = α₁ e₁·ω·φ = −π e₂·φ.
        let g = Grid::new(64).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::square(1.0).unwrap());
        let chi = SpinCharacter::new(-1, 1).unwrap();
        let phi = SpinorField::from_fn(g, chi, m, |s| Quaternion::omega_exp(PI * s.x)).unwrap();
        let d = dirac(&phi);
        let expected = phi.field().map_twisted(|q| -q.left_j() * PI);
        assert!(d.sup_dist(&expected) < 1e-5);
    }

    #[test]
    fn two_routes_agree() {
        let g = Grid::new(64).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::new(Vec2::new(1.0, 0.1), Vec2::new(0.2, 1.0)).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let phi = random_unit_spinor(g, SpinCharacter::new(-1, -1).unwrap(), m, &mut rng);
        let p = pair_from_spinor(&phi).unwrap();
        let a = dirac(&phi);
        let b = dirac_from_pair(&p, &phi);
        assert!(a.sup_dist(&b) < 1e-4 * a.sup_norm().max(1.0));
    }
}
