//! Explicit critical spinors: the flat-torus saddle family, parallel spinors,
//! twistor spinors on the round sphere, and predicates classifying flat
//! critical points.

pub mod classify;
pub mod saddle;
pub mod sphere;

pub use classify::{classify_flat_critical, da_relation_residual, tt_predicate, Classification, Verdict};
pub use saddle::{
    build_parallel, build_saddle, check_descent, moduli_energy_curve, moduli_f, moduli_f_second_derivative,
    seam_mismatch, second_variation, ModuliPoint, SaddleParams, SecondVariation,
};
pub use sphere::{twistor_closed_form_check, TwistorParams, TwistorReport};
