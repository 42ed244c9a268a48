//! Flat tori: lattices, spin characters, constant metrics, grid fields,
//! finite differences, exterior calculus and the Poisson solver.

pub mod field;
pub mod forms;
pub mod lattice;
pub mod metric;
pub mod poisson;

pub use field::{
    pairwise_sum, CovectorField, EndomorphismField, Field, FieldValue, Grid, QuaternionField, ScalarField,
};
pub use forms::{divergence, gradient, hodge_star, hodge_star_field, laplacian_composed, nabla, star_d};
pub use lattice::{spin_structure_count, Lattice, SpinCharacter};
pub use metric::{covariant_frame, FlatMetric};
pub use poisson::{apply_laplacian, poisson_solve, LaplacianKind};
