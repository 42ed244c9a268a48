use crate::algebra::{Mat2, Vec2};
use crate::error::{Error, Result};
use crate::functional::gradient::{pair_divergences, pair_gradient_residual};
use crate::functional::PairField;
use crate::report::Check;
use serde::Serialize;

/// Default tolerance `C·h³` with this constant.
pub const CLASSIFY_CONSTANT: f64 = 10.0;

pub fn default_tolerance(pair: &PairField) -> f64 {
    CLASSIFY_CONSTANT * pair.grid().h().powi(3)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    AbsoluteMinimiser,
    SaddleFamily,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub gradient_residual: f64,
    pub checks: Vec<Check>,
}

/// `dA(e₁,e₂) = ∇₁(A e₂) − ∇₂(A e₁)` minus `2β₁ J A(e₂) − 2β₂ J A(e₁)`.
pub fn da_relation_residual(pair: &PairField) -> f64 {
    let f = &pair.metric.frame;
    let d1 = pair.a.frame_derivative(f, 0);
    let d2 = pair.a.frame_derivative(f, 1);
    let mut worst = 0.0f64;
    for i in 0..pair.grid().len() {
        let a = pair.a.data()[i];
        let b = pair.beta.data()[i];
        let da = d1.data()[i].col(1) - d2.data()[i].col(0);
        let rhs = Mat2::J.apply(a.col(1)) * (2.0 * b.x) - Mat2::J.apply(a.col(0)) * (2.0 * b.y);
        worst = worst.max((da - rhs).norm());
    }
    worst
}

/// Sorts a numerically critical flat pair into the two classes of critical
/// points on a flat torus. Checks: `β` parallel, `A(β^♯) = 0`,
/// `|A|² = |β|²`, and the `dA` relation.
pub fn classify_flat_critical(pair: &PairField, tol: f64) -> Result<Classification> {
    let (r1, r2) = pair_gradient_residual(pair);
    let residual = r1 + r2;
    if !(residual <= tol) {
        return Err(Error::NotCritical { residual, tol });
    }
    let f = &pair.metric.frame;
    let [b1, b2] = pair.beta.frame_derivatives(f);
    let grad_beta = b1.sup_norm().max(b2.sup_norm());
    let kernel = pair.a.zip_map(&pair.beta, |a, b| a.apply(b)).sup_norm();
    let norms = pair
        .a
        .zip_map(&pair.beta, |a: Mat2, b: Vec2| a.frob(a) - b.norm_sqr())
        .sup_norm();
    let checks = vec![
        Check::new("beta_parallel", grad_beta, tol),
        Check::new("beta_sharp_in_ker_A", kernel, tol),
        Check::new("norm_A_eq_norm_beta", norms, tol),
        Check::new("dA_relation", da_relation_residual(pair), tol),
    ];
    let vanishing = pair.a.sup_norm().max(pair.beta.sup_norm()) <= tol;
    let verdict = if !checks.iter().all(|c| c.pass) {
        Verdict::Inconsistent
    } else if vanishing {
        Verdict::AbsoluteMinimiser
    } else {
        Verdict::SaddleFamily
    };
    Ok(Classification {
        verdict,
        gradient_residual: residual,
        checks,
    })
}

/// `β ≡ 0`, `tr A ≡ 0`, `A` symmetric and `div A ≡ 0`, each within `tol`.
pub fn tt_predicate(pair: &PairField, tol: f64) -> bool {
    let beta = pair.beta.sup_norm();
    let trace = pair.a.map(|a| a.trace()).sup_norm();
    let asym = pair.a.map(|a| a.m[0][1] - a.m[1][0]).sup_norm();
    let (div_a, _) = pair_divergences(pair);
    beta <= tol && trace <= tol && asym <= tol && div_a.sup_norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::saddle::{build_parallel, build_saddle, SaddleParams};
    use crate::functional::{pair_from_spinor, random_unit_spinor};
    use crate::geometry::{EndomorphismField, FlatMetric, Grid, Lattice, SpinCharacter};
    use rand::SeedableRng;

    #[test]
    fn saddle_and_parallel_verdicts() {
        let g = Grid::new(64).unwrap();
        let l = Lattice::saddle(1.0).unwrap();
        let phi = build_saddle(&SaddleParams::critical(1.0, 0.0).unwrap(), &l, SpinCharacter::new(-1, -1).unwrap(), g).unwrap();
        let pair = pair_from_spinor(&phi).unwrap();
        let c = classify_flat_critical(&pair, default_tolerance(&pair)).unwrap();
        assert_eq!(c.verdict, Verdict::SaddleFamily, "{c:?}");
        assert!(!tt_predicate(&pair, default_tolerance(&pair)));

        let par = pair_from_spinor(&build_parallel(&l, SpinCharacter::TRIVIAL, g).unwrap()).unwrap();
        let c = classify_flat_critical(&par, 1e-12).unwrap();
        assert_eq!(c.verdict, Verdict::AbsoluteMinimiser);
        assert!(tt_predicate(&par, 1e-12));
    }

    #[test]
    fn non_critical_rejected() {
        let g = Grid::new(32).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::square(1.0).unwrap());
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let phi = random_unit_spinor(g, SpinCharacter::TRIVIAL, m, &mut rng);
        let pair = pair_from_spinor(&phi).unwrap();
        assert!(matches!(classify_flat_critical(&pair, 1e-3), Err(Error::NotCritical { .. })));
    }

    #[test]
    fn multiple_of_identity_is_not_tt() {
        let g = Grid::new(8).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::square(1.0).unwrap());
        let pair = PairField {
            a: EndomorphismField::from_fn(g, |_| Mat2::IDENTITY * 0.7),
            beta: crate::geometry::CovectorField::zeros(g, [1.0, 1.0]),
            metric: m,
        };
        assert!(!tt_predicate(&pair, 1e-9));
    }
}
