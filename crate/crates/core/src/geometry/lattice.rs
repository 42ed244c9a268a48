use crate::algebra::{Mat2, Vec2};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Rank-two lattice `Γ = ℤγ₁ ⊕ ℤγ₂ ⊂ ℝ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lattice {
    pub gamma1: Vec2,
    pub gamma2: Vec2,
}

impl Lattice {
    pub fn new(gamma1: Vec2, gamma2: Vec2) -> Result<Self> {
        let l = Lattice { gamma1, gamma2 };
        let d = l.basis().det();
        if !d.is_finite() || d.abs() < 1e-12 {
            return Err(Error::DegenerateLattice(d.abs()));
        }
        Ok(l)
    }

    /// Unit square lattice `ℤ²`.
    pub fn square(side: f64) -> Result<Self> {
        Lattice::new(Vec2::new(side, 0.0), Vec2::new(0.0, side))
    }

    /// `Γ_ℓ = ℤ ℓ(1,1) ⊕ ℤ ℓ(1,−1)`, the lattice carrying the saddle family.
    pub fn saddle(ell: f64) -> Result<Self> {
        Lattice::new(Vec2::new(ell, ell), Vec2::new(ell, -ell))
    }

    pub fn scaled(&self, s: f64) -> Result<Self> {
        Lattice::new(self.gamma1 * s, self.gamma2 * s)
    }

    /// Basis matrix `B = [γ₁ γ₂]` with the generators as columns.
    pub fn basis(&self) -> Mat2 {
        Mat2::from_columns(self.gamma1, self.gamma2)
    }

    pub fn area(&self) -> f64 {
        self.basis().det().abs()
    }

    /// Physical position of lattice coordinates `s`.
    pub fn position(&self, s: Vec2) -> Vec2 {
        self.basis().apply(s)
    }

    pub fn generator(&self, i: usize) -> Vec2 {
        if i == 0 {
            self.gamma1
        } else {
            self.gamma2
        }
    }
}

/// Spin structure on `ℝ²/Γ` as a character `χ: Γ → ℤ₂`, stored by its values on
/// the two generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpinCharacter {
    pub chi: [i8; 2],
}

impl SpinCharacter {
    /// The trivial character; the only spin structure admitting parallel spinors.
    pub const TRIVIAL: SpinCharacter = SpinCharacter { chi: [1, 1] };

    pub fn new(c1: i64, c2: i64) -> Result<Self> {
        for c in [c1, c2] {
            if c != 1 && c != -1 {
                return Err(Error::BadCharacter(c));
            }
        }
        Ok(SpinCharacter {
            chi: [c1 as i8, c2 as i8],
        })
    }

    /// All four characters of a rank-two lattice.
    pub fn all() -> [SpinCharacter; 4] {
        [
            SpinCharacter { chi: [1, 1] },
            SpinCharacter { chi: [-1, 1] },
            SpinCharacter { chi: [1, -1] },
            SpinCharacter { chi: [-1, -1] },
        ]
    }

    pub fn sign(&self, i: usize) -> f64 {
        self.chi[i] as f64
    }

    pub fn signs(&self) -> [f64; 2] {
        [self.sign(0), self.sign(1)]
    }

    /// Value on the lattice vector `m₁γ₁ + m₂γ₂`.
    pub fn eval(&self, m1: i64, m2: i64) -> i8 {
        let mut v = 1i8;
        if m1.rem_euclid(2) == 1 {
            v *= self.chi[0];
        }
        if m2.rem_euclid(2) == 1 {
            v *= self.chi[1];
        }
        v
    }

    pub fn is_trivial(&self) -> bool {
        self.chi == [1, 1]
    }
}

/// Numbers of spin structures on a closed surface of genus `γ`:
/// `(total, bounding, non-bounding) = (2^{2γ}, 2^{γ−1}(2^γ+1), 2^{γ−1}(2^γ−1))`.
pub fn spin_structure_count(gamma: u32) -> Result<(u128, u128, u128)> {
    if gamma > 63 {
        return Err(Error::InvalidParameter(format!(
            "genus {gamma} too large for exact counting"
        )));
    }
    let p = 1u128 << gamma;
    let total = p * p;
    // 2^{γ−1}(2^γ ± 1) = (4^γ ± 2^γ)/2 stays integral for γ = 0.
    let bounding = (total + p) / 2;
    let non_bounding = (total - p) / 2;
    Ok((total, bounding, non_bounding))
}
