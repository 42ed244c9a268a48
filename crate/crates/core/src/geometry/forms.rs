//! Exterior calculus on the flat torus in frame components.
//!
//! Divergence follows the geometric sign, `div β = −Σₖ (∇_{eₖ}β)(eₖ)`, so that
//! `∫⟨df, β⟩ = ∫ f div β`. The Hodge star on 1-forms is `⋆e¹ = e²`, `⋆e² = −e¹`.

use super::field::{CovectorField, Field, ScalarField};
use super::metric::FlatMetric;
use crate::algebra::Vec2;

/// `df` in frame components.
pub fn gradient(f: &ScalarField, metric: &FlatMetric) -> CovectorField {
    let [d1, d2] = f.frame_derivatives(&metric.frame);
    d1.zip_map(&d2, Vec2::new)
}

/// `div β = −(∇₁β₁ + ∇₂β₂)`.
pub fn divergence(beta: &CovectorField, metric: &FlatMetric) -> ScalarField {
    let [d1, d2] = beta.frame_derivatives(&metric.frame);
    d1.zip_map(&d2, |a, b| -(a.x + b.y))
}

/// `⋆dβ = ∇₁β₂ − ∇₂β₁`.
pub fn star_d(beta: &CovectorField, metric: &FlatMetric) -> ScalarField {
    let [d1, d2] = beta.frame_derivatives(&metric.frame);
    d1.zip_map(&d2, |a, b| a.y - b.x)
}

/// Pointwise Hodge star on 1-forms.
#[inline]
pub fn hodge_star(beta: Vec2) -> Vec2 {
    Vec2::new(-beta.y, beta.x)
}

pub fn hodge_star_field(beta: &CovectorField) -> CovectorField {
    beta.map(hodge_star)
}

/// Consistent Laplacian `Σᵢ ∇ᵢ∇ᵢ f`, composed from first differences.
pub fn laplacian_composed(f: &ScalarField, metric: &FlatMetric) -> ScalarField {
    let [d1, d2] = f.frame_derivatives(&metric.frame);
    let [d11, _] = d1.frame_derivatives(&metric.frame);
    let [_, d22] = d2.frame_derivatives(&metric.frame);
    d11.zip_map(&d22, |a, b| a + b)
}

/// Frame derivatives of any tensor field, `[∇₁F, ∇₂F]`.
pub fn nabla<T: super::field::FieldValue>(f: &Field<T>, metric: &FlatMetric) -> [Field<T>; 2] {
    f.frame_derivatives(&metric.frame)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Grid, Lattice};
    use std::f64::consts::PI;

    #[test]
    fn integration_by_parts() {
        let l = Lattice::new(Vec2::new(1.0, 0.1), Vec2::new(-0.2, 0.9)).unwrap();
        let m = FlatMetric::from_lattice(&l);
        let g = Grid::new(32).unwrap();
        let f = ScalarField::from_fn(g, |s| (2.0 * PI * s.x).sin() + (2.0 * PI * (s.x + s.y)).cos());
        let beta = CovectorField::from_fn(g, |s| {
            Vec2::new((2.0 * PI * s.y).cos(), (4.0 * PI * s.x).sin() * (2.0 * PI * s.y).cos())
        });
        let w = m.density() * g.h() * g.h();
        let lhs = gradient(&f, &m).zip_map(&beta, |a, b| a.dot(b)).integrate(w);
        let rhs = f.zip_map(&divergence(&beta, &m), |a, b| a * b).integrate(w);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn exact_forms_are_closed() {
        let l = Lattice::new(Vec2::new(1.0, 0.3), Vec2::new(0.0, 1.2)).unwrap();
        let m = FlatMetric::from_lattice(&l);
        let g = Grid::new(16).unwrap();
        let f = ScalarField::from_fn(g, |s| (2.0 * PI * s.x).sin() * (2.0 * PI * s.y).sin());
        let r = star_d(&gradient(&f, &m), &m);
        assert!(r.sup_norm() < 1e-10);
    }

    #[test]
    fn star_squares_to_minus_one() {
        let b = Vec2::new(0.3, -1.7);
        assert_eq!(hodge_star(hodge_star(b)), -b);
        assert_eq!(hodge_star(Vec2::new(1.0, 0.0)), Vec2::new(0.0, 1.0));
    }
}
