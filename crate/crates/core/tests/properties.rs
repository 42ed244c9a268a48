use proptest::prelude::*;
use spinergy::families::{check_descent, moduli_f, seam_mismatch, twistor_closed_form_check, SaddleParams, TwistorParams};
use spinergy::functional::random_unit_spinor;
use spinergy::geometry::{FlatMetric, Grid, Lattice, SpinCharacter};
use spinergy::immersion::{
    almost_minimiser_energy, handle_neck_distance, willmore_product_torus, HandleProfile,
};
use spinergy::{clifford_mul, omega_mul, Quaternion, Vec2};
use rand::SeedableRng;
use std::f64::consts::PI;

fn unit_quaternion() -> impl Strategy<Value = Quaternion> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64)
        .prop_filter("away from zero", |(a, b, c, d)| a * a + b * b + c * c + d * d > 1e-2)
        .prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d).normalize())
}

fn unit_vector() -> impl Strategy<Value = Vec2> {
    (0.0..2.0 * PI).prop_map(|t| Vec2::new(t.cos(), t.sin()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn clifford_frame_is_orthonormal(q in unit_quaternion(), x in unit_vector()) {
        let frame = [q, clifford_mul(x, q), clifford_mul(x.rot(), q), omega_mul(q)];
        for (i, a) in frame.iter().enumerate() {
            for (j, b) in frame.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((a.dot(*b) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn left_action_commutes_with_right(q in unit_quaternion(), c in unit_quaternion(), x in unit_vector()) {
        let lhs = clifford_mul(x, q) * c;
        let rhs = clifford_mul(x, q * c);
        prop_assert!((lhs - rhs).norm() < 1e-14);
        prop_assert!((omega_mul(clifford_mul(x, q)) - clifford_mul(x.rot(), q)).norm() < 1e-14);
    }

    #[test]
    fn twistor_energy_is_pi(a in -3.0..3.0f64, b in -3.0..3.0f64) {
        prop_assume!(a.hypot(b) > 1e-3);
        let r = twistor_closed_form_check(TwistorParams { a, b });
        prop_assert!((r.energy.unwrap() - PI).abs() < 1e-12);
        prop_assert!(r.checks.iter().all(|c| c.pass));
    }

    #[test]
    fn moduli_curve_slope(theta in 0.05..1.5f64, c in -2.0..2.0f64) {
        let f = |t: f64| moduli_f(theta, c, t);
        let d = (f(1e-5) - f(-1e-5)) / 2e-5;
        prop_assert!((d + 2.0 * (2.0 * theta).cos()).abs() < 1e-6);
    }

    #[test]
    fn saddle_descent_matches_seams(ell in 0.5..2.0f64, c1 in prop::bool::ANY, c2 in prop::bool::ANY) {
        let params = SaddleParams::critical(ell, 0.0).unwrap();
        let chi = SpinCharacter::new(if c1 { 1 } else { -1 }, if c2 { 1 } else { -1 }).unwrap();
        let lattice = Lattice::saddle(ell).unwrap();
        let seams = seam_mismatch(&params, &lattice, chi);
        match check_descent(&params, &lattice, chi) {
            Ok(()) => prop_assert!(seams.iter().all(|s| *s < 1e-13)),
            Err(_) => prop_assert!(seams.iter().any(|s| *s > 0.5)),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn handle_profile_is_arclength_and_c1(l in 0.1..1e4f64) {
        let p = HandleProfile::new(l).unwrap();
        prop_assert!(p.unit_speed_residual(2000) < 1e-12);
        let [j1, j2] = p.c1_jumps();
        prop_assert!(j1.max(j2) < 1e-12 * p.r);
    }

    #[test]
    fn neck_identity(l in 0.1..100.0f64) {
        prop_assert!(handle_neck_distance(l).unwrap().residual < 1e-12);
    }

    #[test]
    fn product_torus_scaling(r in 0.1..10.0f64, delta in 1e-3..1.0f64) {
        let w = willmore_product_torus(r, delta).unwrap();
        prop_assert!((w - PI * delta / (4.0 * r)).abs() < 1e-12 * w.max(1.0));
        prop_assert!((willmore_product_torus(r, delta / 2.0).unwrap() - w / 2.0).abs() < 1e-12);
    }

    #[test]
    fn almost_minimiser_exceeds_infimum(gamma in 1u32..6, l in 1.0..1e4f64, base in 0.0..1.0f64) {
        let ls = vec![l; (gamma - 1) as usize];
        let e = almost_minimiser_energy(gamma, &ls, base).unwrap();
        prop_assert!(e >= PI * (gamma as f64 - 1.0));
        prop_assert!(almost_minimiser_energy(gamma, &[l; 6], base).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn energy_invariances(seed in any::<u64>(), c in unit_quaternion(), scale in 0.2..5.0f64, k in 0usize..4) {
        let g = Grid::new(16).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::new(Vec2::new(1.0, 0.2), Vec2::new(-0.1, 0.8)).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let phi = random_unit_spinor(g, SpinCharacter::all()[k], m, &mut rng);
        let e = phi.energy();
        prop_assert!((phi.right_mul(c).energy() - e).abs() < 1e-11 * e.max(1.0));
        prop_assert!((phi.with_metric(m.rescaled(scale)).energy() - e).abs() < 1e-11 * e.max(1.0));
        prop_assert!(spinergy::immersion::weierstrass::isometry_residual(&phi) < 1e-12);
        for t in [-0.3, 0.2] {
            let d = m.deformed(t).unwrap();
            prop_assert!((d.area() - m.area()).abs() < 1e-12);
        }
    }
}
