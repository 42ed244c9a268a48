use super::lattice::Lattice;
use crate::algebra::Mat2;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Constant metric on the torus in lattice coordinates `s ∈ [0,1)²`.
///
/// `gram` is the Gram matrix `G` of `∂_{s₁}, ∂_{s₂}`. `frame` holds the
/// orthonormal frame: `eᵢ = Σⱼ E[j][i] ∂_{sⱼ}`, so `Eᵀ G E = I` and `E Eᵀ = G⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatMetric {
    pub gram: Mat2,
    pub frame: Mat2,
}

/// Symmetric inverse square root of a positive definite Gram matrix.
pub fn covariant_frame(gram: Mat2) -> Result<Mat2> {
    let g = gram.m;
    let asym = (g[0][1] - g[1][0]).abs();
    let scale = gram.norm().max(1e-300);
    if !gram.norm().is_finite() || asym > 1e-12 * scale {
        return Err(Error::NotPositiveDefinite);
    }
    let sym = gram.sym();
    let [lo, _] = sym.sym_eigenvalues();
    if lo <= 1e-14 * scale {
        return Err(Error::NotPositiveDefinite);
    }
    let sd = sym.det().sqrt();
    let root = (sym + Mat2::IDENTITY * sd) * (1.0 / (sym.trace() + 2.0 * sd).sqrt());
    root.inverse().ok_or(Error::NotPositiveDefinite)
}

impl FlatMetric {
    /// Metric pulled back from `ℝ²` through `s ↦ B s`. The frame is the standard
    /// basis of the plane, so frame components are physical components.
    pub fn from_lattice(lattice: &Lattice) -> Self {
        let b = lattice.basis();
        let frame = b.inverse().expect("lattice validated on construction");
        FlatMetric {
            gram: b.transpose() * b,
            frame,
        }
    }

    pub fn from_gram(gram: Mat2) -> Result<Self> {
        let frame = covariant_frame(gram)?;
        Ok(FlatMetric {
            gram: gram.sym(),
            frame,
        })
    }

    /// `√det G`, the density of the volume form in lattice coordinates.
    pub fn density(&self) -> f64 {
        self.gram.det().sqrt()
    }

    pub fn area(&self) -> f64 {
        self.density()
    }

    pub fn inverse_gram(&self) -> Mat2 {
        self.frame * self.frame.transpose()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.gram.sym_eigenvalues()[0]
    }

    /// The homothetic metric `c² g`.
    pub fn rescaled(&self, c: f64) -> Self {
        FlatMetric {
            gram: self.gram * (c * c),
            frame: self.frame * (1.0 / c),
        }
    }

    /// Lattice-coordinate stretch `S_t = (1+t) P + (1+t)⁻¹ Q`, with `P`, `Q` the
    /// orthogonal projections onto the lattice directions `(1,1)` and `(1,−1)`.
    pub fn stretch(t: f64) -> Mat2 {
        let a = 1.0 + t;
        let p = Mat2::new(0.5, 0.5, 0.5, 0.5);
        let q = Mat2::new(0.5, -0.5, -0.5, 0.5);
        p * a + q * (1.0 / a)
    }

    /// Deformation family `G_t = S_tᵀ G S_t`, `E_t = S_t⁻¹ E`. Volume preserving.
    /// On `Γ_ℓ` this stretches the plane by `1+t` along the first axis and by
    /// `1/(1+t)` along the second.
    pub fn deformed(&self, t: f64) -> Result<Self> {
        if !(t > -1.0) || !t.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "deformation parameter must exceed -1, got {t}"
            )));
        }
        let s = FlatMetric::stretch(t);
        let s_inv = s.inverse().ok_or(Error::NotPositiveDefinite)?;
        Ok(FlatMetric {
            gram: (s.transpose() * self.gram * s).sym(),
            frame: s_inv * self.frame,
        })
    }

    /// `d/dt g_t` at `t = 0`, in components with respect to the frame of `self`.
    pub fn deformation_velocity(&self) -> Mat2 {
        let sdot = Mat2::new(0.5, 0.5, 0.5, 0.5) - Mat2::new(0.5, -0.5, -0.5, 0.5);
        let gdot = sdot.transpose() * self.gram + self.gram * sdot;
        (self.frame.transpose() * gdot * self.frame).sym()
    }

    /// Residual of `Eᵀ G E = I`.
    pub fn orthonormality_residual(&self) -> f64 {
        (self.frame.transpose() * self.gram * self.frame - Mat2::IDENTITY).norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vec2;

    #[test]
    fn frame_of_diagonal_gram() {
        let e = covariant_frame(Mat2::diag(4.0, 1.0)).unwrap();
        assert!((e - Mat2::diag(0.5, 1.0)).norm() < 1e-15);
        let e = covariant_frame(Mat2::IDENTITY).unwrap();
        assert!((e - Mat2::IDENTITY).norm() < 1e-15);
    }

    #[test]
    fn indefinite_rejected() {
        assert!(covariant_frame(Mat2::new(1.0, 0.0, 0.0, -1.0)).is_err());
        assert!(covariant_frame(Mat2::new(1.0, 2.0, 2.0, 1.0)).is_err());
    }

    #[test]
    fn orthonormal_frames() {
        let g = Mat2::new(2.0, 0.7, 0.7, 1.3);
        let m = FlatMetric::from_gram(g).unwrap();
        assert!(m.orthonormality_residual() < 1e-14);
        assert!((m.inverse_gram() * g - Mat2::IDENTITY).norm() < 1e-14);
        let l = Lattice::new(Vec2::new(1.0, 0.2), Vec2::new(0.3, 1.1)).unwrap();
        let m = FlatMetric::from_lattice(&l);
        assert!(m.orthonormality_residual() < 1e-14);
        assert!((m.area() - l.area()).abs() < 1e-14);
    }

    #[test]
    fn deformation_on_saddle_lattice_is_axis_stretch() {
        let l = Lattice::saddle(1.0).unwrap();
        let m = FlatMetric::from_lattice(&l);
        let t = 0.3;
        let d = m.deformed(t).unwrap();
        // Physical map of the deformed torus in the undeformed frame.
        let phys = l.basis() * FlatMetric::stretch(t) * l.basis().inverse().unwrap();
        assert!((phys - Mat2::diag(1.0 + t, 1.0 / (1.0 + t))).norm() < 1e-14);
        assert!((d.area() - m.area()).abs() < 1e-12);
        assert!(d.orthonormality_residual() < 1e-13);
        assert!((m.deformation_velocity() - Mat2::diag(2.0, -2.0)).norm() < 1e-14);
    }
}
