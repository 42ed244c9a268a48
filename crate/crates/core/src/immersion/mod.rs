//! Willmore energies of explicit surfaces and the spinorial Weierstraß
//! integrator.

pub mod weierstrass;
pub mod willmore;

pub use weierstrass::{
    closedness_residual, mean_curvature_from_spinor, weierstrass_form, weierstrass_integrate, ImmersionResult,
    MeanCurvature,
};
pub use willmore::{
    almost_minimiser_energy, almost_minimiser_parameters, handle_neck_distance, handle_willmore_claim,
    willmore_product_torus, willmore_revolution, AlmostMinimiser, HandleProfile, HandleWillmore, NeckDistance,
};
