//! Periodic Poisson solver `Δu = ρ` by conjugate gradients.

use super::field::{pairwise_sum, Field, Grid, ScalarField};
use super::metric::FlatMetric;
use crate::error::{Error, Result};

/// Discretisation of `Δ = Σ G⁻¹_{jk} ∂_j ∂_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    /// Five-point fourth-order second differences on the diagonal terms. Kernel:
    /// constants only.
    Compact,
    /// Composition of first differences, `Σᵢ ∇ᵢ∇ᵢ`. Agrees exactly with
    /// `⋆d⋆d` built from the same first differences; its kernel also contains
    /// the three checkerboard modes.
    Composed,
}

const RESIDUAL_TOL: f64 = 1e-11;
const MEAN_TOL: f64 = 1e-10;

/// Applies the chosen discrete Laplacian.
pub fn apply_laplacian(u: &ScalarField, metric: &FlatMetric, kind: LaplacianKind) -> ScalarField {
    let gi = metric.inverse_gram();
    let mixed = 0.5 * (gi.m[0][1] + gi.m[1][0]);
    let grid = u.grid();
    let (u11, u22, u1) = match kind {
        LaplacianKind::Compact => (second_diff(u, 0), second_diff(u, 1), None),
        LaplacianKind::Composed => {
            let d0 = u.diff(0);
            let d1 = u.diff(1);
            (d0.diff(0), d1.diff(1), Some(d0))
        }
    };
    let mut out = u11.zip_map(&u22, |a, b| gi.m[0][0] * a + gi.m[1][1] * b);
    if mixed != 0.0 {
        let u12 = u1.unwrap_or_else(|| u.diff(0)).diff(1);
        for (o, v) in out.data_mut().iter_mut().zip(u12.data()) {
            *o += 2.0 * mixed * v;
        }
    }
    debug_assert_eq!(out.grid(), grid);
    out
}

/// Compact fourth-order second difference along `axis` (untwisted).
pub fn second_diff(u: &ScalarField, axis: usize) -> ScalarField {
    let grid = u.grid();
    let n = grid.n();
    let c = (n * n) as f64 / 12.0;
    let src = u.data();
    let wrap = |k: isize| -> usize { k.rem_euclid(n as isize) as usize };
    let mut out = vec![0.0; grid.len()];
    for a in 0..n {
        for b in 0..n {
            let v = |d: isize| -> f64 {
                if axis == 0 {
                    src[wrap(a as isize + d) * n + b]
                } else {
                    src[a * n + wrap(b as isize + d)]
                }
            };
            out[a * n + b] = c * (-v(2) + 16.0 * v(1) - 30.0 * v(0) + 16.0 * v(-1) - v(-2));
        }
    }
    Field::from_vec(grid, [1.0, 1.0], out).expect("same grid")
}

/// Orthonormal basis (for the node sum) of the kernel of the chosen Laplacian.
fn kernel_modes(grid: Grid, kind: LaplacianKind) -> Vec<Vec<f64>> {
    let n = grid.n();
    let norm = 1.0 / (grid.len() as f64).sqrt();
    let mode = |pa: bool, pb: bool| -> Vec<f64> {
        (0..grid.len())
            .map(|i| {
                let (a, b) = (i / n, i % n);
                let mut s = norm;
                if pa && a % 2 == 1 {
                    s = -s;
                }
                if pb && b % 2 == 1 {
                    s = -s;
                }
                s
            })
            .collect()
    };
    match kind {
        LaplacianKind::Compact => vec![mode(false, false)],
        LaplacianKind::Composed => vec![
            mode(false, false),
            mode(true, false),
            mode(false, true),
            mode(true, true),
        ],
    }
}

fn project_out(v: &mut [f64], modes: &[Vec<f64>]) {
    for m in modes {
        let c: f64 = v.iter().zip(m).map(|(a, b)| a * b).sum();
        for (x, y) in v.iter_mut().zip(m) {
            *x -= c * y;
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    let prod: Vec<f64> = a.iter().zip(b).map(|(x, y)| x * y).collect();
    pairwise_sum(&prod)
}

fn sup(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Solves `Δu = ρ` with zero-mean `u`. `ρ` must be mean-free.
pub fn poisson_solve(rho: &ScalarField, metric: &FlatMetric, kind: LaplacianKind) -> Result<ScalarField> {
    let grid = rho.grid();
    let scale = rho.sup_norm().max(1.0);
    let mean = rho.mean();
    if mean.abs() > MEAN_TOL * scale {
        return Err(Error::NotMeanFree(mean));
    }
    let modes = kernel_modes(grid, kind);
    // Solve (−Δ) u = −ρ on the complement of the kernel.
    let mut b: Vec<f64> = rho.data().iter().map(|v| -v).collect();
    project_out(&mut b, &modes);
    let tol = RESIDUAL_TOL * scale;
    let neg_lap = |p: &[f64]| -> Vec<f64> {
        let f = Field::from_vec(grid, [1.0, 1.0], p.to_vec()).expect("same grid");
        apply_laplacian(&f, metric, kind).into_vec().into_iter().map(|v| -v).collect()
    };
    let mut x = vec![0.0; grid.len()];
    let max_iter = 40 * grid.n() + 200;
    let mut total = 0usize;
    // A few restarts guard against drift of the recursive residual.
    for _restart in 0..4 {
        let ax = neg_lap(&x);
        let mut r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        project_out(&mut r, &modes);
        if sup(&r) <= tol {
            break;
        }
        let mut p = r.clone();
        let mut rs = dot(&r, &r);
        while total < max_iter {
            total += 1;
            let ap = neg_lap(&p);
            let pap = dot(&p, &ap);
            if pap <= 0.0 {
                break;
            }
            let alpha = rs / pap;
            for i in 0..x.len() {
                x[i] += alpha * p[i];
                r[i] -= alpha * ap[i];
            }
            if sup(&r) <= 0.1 * tol {
                break;
            }
            let rs_new = dot(&r, &r);
            let beta = rs_new / rs;
            rs = rs_new;
            for i in 0..p.len() {
                p[i] = r[i] + beta * p[i];
            }
        }
    }
    project_out(&mut x, &modes);
    let u = Field::from_vec(grid, [1.0, 1.0], x)?;
    let mut res: Vec<f64> = apply_laplacian(&u, metric, kind)
        .data()
        .iter()
        .zip(&b)
        .map(|(l, bi)| l + bi)
        .collect();
    project_out(&mut res, &modes);
    let residual = sup(&res);
    if residual > tol {
        return Err(Error::NotConverged {
            iterations: total,
            residual,
        });
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Mat2;
    use std::f64::consts::PI;

    #[test]
    fn manufactured_sine() {
        let grid = Grid::new(32).unwrap();
        let metric = FlatMetric::from_gram(Mat2::IDENTITY).unwrap();
        let exact = ScalarField::from_fn(grid, |s| (2.0 * PI * s.x).sin());
        let rho = apply_laplacian(&exact, &metric, LaplacianKind::Compact);
        let u = poisson_solve(&rho, &metric, LaplacianKind::Compact).unwrap();
        assert!(u.sup_dist(&exact) < 1e-9);
        let rho_c = ScalarField::from_fn(grid, |s| -4.0 * PI * PI * (2.0 * PI * s.x).sin());
        let u = poisson_solve(&rho_c, &metric, LaplacianKind::Compact).unwrap();
        assert!(u.sup_dist(&exact) < 1e-4);
    }

    #[test]
    fn zero_rhs_gives_zero() {
        let grid = Grid::new(16).unwrap();
        let metric = FlatMetric::from_gram(Mat2::new(2.0, 0.3, 0.3, 1.0)).unwrap();
        let u = poisson_solve(&ScalarField::zeros(grid, [1.0, 1.0]), &metric, LaplacianKind::Compact).unwrap();
        assert_eq!(u.sup_norm(), 0.0);
    }

    #[test]
    fn nonzero_mean_rejected() {
        let grid = Grid::new(16).unwrap();
        let metric = FlatMetric::from_gram(Mat2::IDENTITY).unwrap();
        let rho = ScalarField::from_fn(grid, |_| 1.0);
        assert!(matches!(
            poisson_solve(&rho, &metric, LaplacianKind::Compact),
            Err(Error::NotMeanFree(_))
        ));
    }

    #[test]
    fn skew_metric_composed() {
        let grid = Grid::new(32).unwrap();
        let metric = FlatMetric::from_gram(Mat2::new(1.5, -0.4, -0.4, 0.8)).unwrap();
        let exact = ScalarField::from_fn(grid, |s| (2.0 * PI * (s.x + 2.0 * s.y)).cos() + (2.0 * PI * s.y).sin());
        let rho = apply_laplacian(&exact, &metric, LaplacianKind::Composed);
        let u = poisson_solve(&rho, &metric, LaplacianKind::Composed).unwrap();
        let res = apply_laplacian(&u, &metric, LaplacianKind::Composed).sup_dist(&rho);
        assert!(res < 1e-9, "{res}");
        assert!(u.sup_dist(&exact) < 1e-9);
    }
}
