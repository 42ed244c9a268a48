//! Spinorial energy `½∫|∇φ|²` of unit spinors on surfaces: discrete operators on
//! flat tori, the negative gradient, explicit critical families, the gradient
//! flow, Willmore handles and the spinorial Weierstraß representation.

pub mod algebra;
pub mod error;
pub mod families;
pub mod flow;
pub mod functional;
pub mod geometry;
pub mod immersion;
pub mod numerics;
pub mod report;
pub mod suite;

pub use algebra::{clifford_mul, omega_exp, omega_mul, right_mul, Mat2, Quaternion, TangentVector2, Vec2};
pub use error::{Error, Result};
pub use functional::{pair_from_spinor, GradientPair, PairField, SpinorField};
pub use geometry::{FlatMetric, Grid, Lattice, SpinCharacter};
