//! Fields on the `N×N` lattice-coordinate grid and their finite differences.
//!
//! Node `(a, b)` sits at `s = (a h, b h)`, `h = 1/N`, stored at `a N + b`.
//! Spinor fields carry a twist: crossing the seam in direction `i` multiplies
//! by `χᵢ`. The first derivative is the fourth-order central difference
//! `(−f₊₂ + 8f₊₁ − 8f₋₁ + f₋₂)/(12h)`, which is skew-adjoint for the plain
//! node sum, so discrete integration by parts is exact.

use crate::algebra::{Mat2, Quaternion, Vec2};
use crate::error::{Error, Result};
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

/// Values that can live at grid nodes and be differenced.
pub trait FieldValue:
    Copy
    + Default
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + Mul<f64, Output = Self>
    + AddAssign
    + SubAssign
{
    /// Pointwise magnitude used by sup norms.
    fn magnitude(&self) -> f64;
}

impl FieldValue for f64 {
    #[inline]
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl FieldValue for Quaternion {
    #[inline]
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl FieldValue for Vec2 {
    #[inline]
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

impl FieldValue for Mat2 {
    #[inline]
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Uniform `N×N` grid on `[0,1)²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grid {
    n: usize,
}

impl Grid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || n % 2 != 0 {
            return Err(Error::BadGridSize(n));
        }
        Ok(Grid { n })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn h(&self) -> f64 {
        1.0 / self.n as f64
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn index(&self, a: usize, b: usize) -> usize {
        a * self.n + b
    }

    /// Lattice coordinates of node `(a, b)`.
    #[inline]
    pub fn coord(&self, a: usize, b: usize) -> Vec2 {
        Vec2::new(a as f64 * self.h(), b as f64 * self.h())
    }

    /// Lattice coordinates of the node stored at `idx`.
    #[inline]
    pub fn coord_of(&self, idx: usize) -> Vec2 {
        self.coord(idx / self.n, idx % self.n)
    }
}

/// Field on a grid with seam signs (`[1, 1]` for tensor fields).
#[derive(Debug, Clone, PartialEq)]
pub struct Field<T> {
    grid: Grid,
    signs: [f64; 2],
    data: Vec<T>,
}

pub type ScalarField = Field<f64>;
pub type CovectorField = Field<Vec2>;
pub type EndomorphismField = Field<Mat2>;
pub type QuaternionField = Field<Quaternion>;

impl<T: FieldValue> Field<T> {
    pub fn zeros(grid: Grid, signs: [f64; 2]) -> Self {
        Field {
            grid,
            signs,
            data: vec![T::default(); grid.len()],
        }
    }

    pub fn from_vec(grid: Grid, signs: [f64; 2], data: Vec<T>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field has {} values, grid needs {}",
                data.len(),
                grid.len()
            )));
        }
        Ok(Field { grid, signs, data })
    }

    /// Untwisted field sampled from a function of lattice coordinates.
    pub fn from_fn(grid: Grid, f: impl Fn(Vec2) -> T) -> Self {
        Self::from_fn_twisted(grid, [1.0, 1.0], f)
    }

    pub fn from_fn_twisted(grid: Grid, signs: [f64; 2], f: impl Fn(Vec2) -> T) -> Self {
        let data = (0..grid.len()).map(|i| f(grid.coord_of(i))).collect();
        Field { grid, signs, data }
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.grid
    }

    #[inline]
    pub fn signs(&self) -> [f64; 2] {
        self.signs
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn at(&self, a: usize, b: usize) -> T {
        self.data[self.grid.index(a, b)]
    }

    pub fn map<U: FieldValue>(&self, f: impl Fn(T) -> U) -> Field<U> {
        Field {
            grid: self.grid,
            signs: [1.0, 1.0],
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Pointwise map keeping the seam signs.
    pub fn map_twisted(&self, f: impl Fn(T) -> T) -> Field<T> {
        Field {
            grid: self.grid,
            signs: self.signs,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map<U: FieldValue, V: FieldValue>(
        &self,
        other: &Field<U>,
        f: impl Fn(T, U) -> V,
    ) -> Field<V> {
        debug_assert_eq!(self.grid, other.grid);
        Field {
            grid: self.grid,
            signs: [1.0, 1.0],
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Reinterprets the seam signs (e.g. after a pointwise map of a twisted field).
    pub fn with_signs(mut self, signs: [f64; 2]) -> Self {
        self.signs = signs;
        self
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.map_twisted(|v| v * s)
    }

    /// `self + s · other`, keeping the seam signs of `self`.
    pub fn axpy(&self, s: f64, other: &Field<T>) -> Self {
        Field {
            grid: self.grid,
            signs: self.signs,
            data: self
                .data
                .iter()
                .zip(other.data.iter())
                .map(|(&a, &b)| a + b * s)
                .collect(),
        }
    }

    /// Sup norm of the pointwise magnitude.
    pub fn sup_norm(&self) -> f64 {
        self.data.iter().map(|v| v.magnitude()).fold(0.0, f64::max)
    }

    /// Sup norm of the difference.
    pub fn sup_dist(&self, other: &Field<T>) -> f64 {
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(&a, &b)| (a - b).magnitude())
            .fold(0.0, f64::max)
    }

    /// Lattice derivative `∂_{s_axis}` by the fourth-order central difference.
    pub fn diff(&self, axis: usize) -> Self {
        let mut out = Field::zeros(self.grid, self.signs);
        diff_into(&self.data, &mut out.data, self.grid.n, axis, self.signs[axis]);
        out
    }

    /// Single covariant derivative `∇_{eᵢ} f`; skips a lattice difference when
    /// the frame entry vanishes.
    pub fn frame_derivative(&self, frame: &Mat2, i: usize) -> Self {
        let (c0, c1) = (frame.m[0][i], frame.m[1][i]);
        match (c0 == 0.0, c1 == 0.0) {
            (false, true) => self.diff(0).scaled(c0),
            (true, false) => self.diff(1).scaled(c1),
            (true, true) => Field::zeros(self.grid, self.signs),
            (false, false) => self.diff(0).scaled(c0).axpy(c1, &self.diff(1)),
        }
    }

    /// Covariant derivatives along the frame, `∇_{eᵢ} f = Σⱼ E[j][i] ∂_{sⱼ} f`.
    pub fn frame_derivatives(&self, frame: &Mat2) -> [Self; 2] {
        let d0 = self.diff(0);
        let d1 = self.diff(1);
        let combine = |i: usize| -> Self {
            let (c0, c1) = (frame.m[0][i], frame.m[1][i]);
            let data = d0
                .data
                .iter()
                .zip(d1.data.iter())
                .map(|(&x, &y)| {
                    if c1 == 0.0 {
                        x * c0
                    } else if c0 == 0.0 {
                        y * c1
                    } else {
                        x * c0 + y * c1
                    }
                })
                .collect();
            Field {
                grid: self.grid,
                signs: self.signs,
                data,
            }
        };
        [combine(0), combine(1)]
    }
}

impl Field<f64> {
    /// Node sum times `weight`; pairwise summation keeps round-off at `O(log N · ε)`.
    pub fn integrate(&self, weight: f64) -> f64 {
        pairwise_sum(&self.data) * weight
    }

    pub fn mean(&self) -> f64 {
        pairwise_sum(&self.data) / self.data.len() as f64
    }
}

/// Pairwise (cascade) summation.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 64 {
        return v.iter().sum();
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

const C1: f64 = 8.0 / 12.0;
const C2: f64 = 1.0 / 12.0;

fn diff_into<T: FieldValue>(src: &[T], dst: &mut [T], n: usize, axis: usize, sign: f64) {
    let inv_h = n as f64;
    let (c1, c2) = (C1 * inv_h, C2 * inv_h);
    if axis == 1 {
        for (row, out) in src.chunks_exact(n).zip(dst.chunks_exact_mut(n)) {
            for b in 2..n - 2 {
                out[b] = (row[b + 1] - row[b - 1]) * c1 - (row[b + 2] - row[b - 2]) * c2;
            }
            let get = |k: isize| -> T {
                if k < 0 {
                    row[(k + n as isize) as usize] * sign
                } else if k >= n as isize {
                    row[(k - n as isize) as usize] * sign
                } else {
                    row[k as usize]
                }
            };
            for b in [0, 1, n - 2, n - 1] {
                let k = b as isize;
                out[b] = (get(k + 1) - get(k - 1)) * c1 - (get(k + 2) - get(k - 2)) * c2;
            }
        }
    } else {
        let row = |a: isize| -> (&[T], f64) {
            if a < 0 {
                let r = (a + n as isize) as usize;
                (&src[r * n..(r + 1) * n], sign)
            } else if a >= n as isize {
                let r = (a - n as isize) as usize;
                (&src[r * n..(r + 1) * n], sign)
            } else {
                let r = a as usize;
                (&src[r * n..(r + 1) * n], 1.0)
            }
        };
        for (a, out) in dst.chunks_exact_mut(n).enumerate() {
            let a = a as isize;
            let (p1, sp1) = row(a + 1);
            let (m1, sm1) = row(a - 1);
            let (p2, sp2) = row(a + 2);
            let (m2, sm2) = row(a - 2);
            let (k1p, k1m, k2p, k2m) = (c1 * sp1, c1 * sm1, c2 * sp2, c2 * sm2);
            for b in 0..n {
                out[b] = p1[b] * k1p - m1[b] * k1m - p2[b] * k2p + m2[b] * k2m;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn grid_validation() {
        assert!(Grid::new(6).is_err());
        assert!(Grid::new(9).is_err());
        assert!(Grid::new(8).is_ok());
    }

    #[test]
    fn derivative_of_sine_is_fourth_order() {
        let mut errs = Vec::new();
        for n in [16, 32, 64] {
            let g = Grid::new(n).unwrap();
            let f = Field::from_fn(g, |s| (2.0 * PI * s.x).sin() * (2.0 * PI * s.y).cos());
            let exact = Field::from_fn(g, |s| 2.0 * PI * (2.0 * PI * s.x).cos() * (2.0 * PI * s.y).cos());
            errs.push(f.diff(0).sup_dist(&exact));
        }
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order > 3.8, "order {order}");
        }
    }

    #[test]
    fn twisted_seam() {
        // sin(π s₂) is antiperiodic in s₂.
        let g = Grid::new(64).unwrap();
        let f = Field::from_fn_twisted(g, [1.0, -1.0], |s| (PI * s.y).sin());
        let exact = Field::from_fn(g, |s| PI * (PI * s.y).cos());
        assert!(f.diff(1).sup_dist(&exact) < 1e-5);
    }

    #[test]
    fn summation_by_parts_is_exact() {
        let g = Grid::new(16).unwrap();
        let f = Field::from_fn_twisted(g, [-1.0, 1.0], |s| (PI * s.x).cos() + s.y * (1.0 - s.y));
        let u = Field::from_fn_twisted(g, [-1.0, 1.0], |s| (3.0 * PI * s.x).sin() * (s.y + 0.3));
        for axis in 0..2 {
            let lhs: f64 = f.diff(axis).data().iter().zip(u.data()).map(|(a, b)| a * b).sum();
            let rhs: f64 = f.data().iter().zip(u.diff(axis).data()).map(|(a, b)| a * b).sum();
            assert!((lhs + rhs).abs() < 1e-11);
        }
    }
}
