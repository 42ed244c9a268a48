//! The spinorial energy, its negative gradient, the pair `(A, β)`, the Dirac
//! operator and the identities linking them.

pub mod conformal;
pub mod dirac;
pub mod directional;
pub mod gradient;
pub mod identities;
pub mod pair;
pub mod spinor;

pub use conformal::{conformal_minimise, ConformalMinimiser};
pub use dirac::{dirac, dirac_field, dirac_from_pair};
pub use gradient::{
    neg_gradient_general, neg_gradient_pair, pair_gradient_residual, spinor_gradient_and_energy, GradientPair,
};
pub use pair::{pair_from_spinor, PairField};
pub use spinor::{random_twisted_field, random_unit_spinor, SpinorField};

/// `𝓔(g, φ) = ½∫|∇φ|² dv`.
pub fn energy(phi: &SpinorField) -> f64 {
    phi.energy()
}
