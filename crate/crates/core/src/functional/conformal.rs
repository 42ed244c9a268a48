use crate::error::Result;
use crate::geometry::{gradient, hodge_star, poisson_solve, star_d, CovectorField, FlatMetric, LaplacianKind, ScalarField};

/// Result of removing the coexact part of a 1-form by a conformal change.
#[derive(Debug, Clone, PartialEq)]
pub struct ConformalMinimiser {
    /// `β̃ = β − ½⋆du`, closed.
    pub beta: CovectorField,
    /// Conformal factor `u = −2b`, where `b ω` is the coexact potential of `β`.
    pub u: ScalarField,
}

/// Writes `β = H + da + δ(b ω)` and returns `u = −2b` with `β̃ = β − ½⋆du`, so
/// that `dβ̃ = 0`. The potential solves `Δb = −⋆dβ` with the Laplacian composed
/// from the same first differences as `d`, making `dβ̃` vanish to solver
/// tolerance.
pub fn conformal_minimise(beta: &CovectorField, metric: &FlatMetric) -> Result<ConformalMinimiser> {
    let sd = star_d(beta, metric);
    let rho = sd.map(|v| -v);
    let b = poisson_solve(&rho, metric, LaplacianKind::Composed)?;
    let u = b.map(|v| -2.0 * v);
    let du = gradient(&u, metric);
    let beta_t = beta.zip_map(&du, |bt, d| bt - hodge_star(d) * 0.5);
    Ok(ConformalMinimiser { beta: beta_t, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec2;
    use crate::geometry::{Grid, Lattice};
    use std::f64::consts::PI;

    #[test]
    fn closed_input_is_fixed() {
        let g = Grid::new(32).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::square(1.0).unwrap());
        let f = ScalarField::from_fn(g, |s| (2.0 * PI * s.x).sin() * (2.0 * PI * s.y).cos());
        let beta = gradient(&f, &m).map(|v| v + Vec2::new(0.3, -0.2));
        let r = conformal_minimise(&beta, &m).unwrap();
        assert!(r.u.sup_norm() < 1e-10);
    }

    #[test]
    fn coexact_part_removed() {
        let g = Grid::new(32).unwrap();
        let m = FlatMetric::from_lattice(&Lattice::new(Vec2::new(1.0, 0.2), Vec2::new(0.0, 0.9)).unwrap());
        let beta = CovectorField::from_fn(g, |s| Vec2::new((2.0 * PI * s.y).sin(), (2.0 * PI * (s.x - s.y)).cos()));
        let r = conformal_minimise(&beta, &m).unwrap();
        assert!(star_d(&r.beta, &m).sup_norm() < 1e-8);
    }
}
