//! Directional derivatives of the energy against the gradient pairing.

use super::gradient::neg_gradient_general;
use super::spinor::SpinorField;
use crate::error::Result;
use crate::geometry::{pairwise_sum, QuaternionField};
use crate::numerics::first_derivative;
use serde::Serialize;

/// Step sizes of the two central differences combined by extrapolation.
pub const DIRECTIONAL_STEPS: (f64, f64) = (1e-2, 5e-3);

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DirectionalCheck {
    /// Extrapolated finite difference of the energy.
    pub finite_difference: f64,
    /// Pairing with the negative gradient.
    pub pairing: f64,
    pub residual: f64,
}

impl DirectionalCheck {
    fn new(finite_difference: f64, pairing: f64) -> Self {
        DirectionalCheck {
            finite_difference,
            pairing,
            residual: (finite_difference - pairing).abs(),
        }
    }
}

/// `d/dt 𝓔(normalise(φ + tη))` at `0` against `−∫⟨Q₂, η⟩`. `η` is projected onto
/// the tangent space of the unit sphere bundle first.
pub fn spinor_slot(phi: &SpinorField, eta: &QuaternionField) -> Result<DirectionalCheck> {
    let tangent = phi.field().zip_map(eta, |p, e| e - p * p.dot(e)).with_signs(phi.chi().signs());
    let q2 = neg_gradient_general(phi).q2;
    let dens: Vec<f64> = q2.data().iter().zip(tangent.data()).map(|(q, e)| q.dot(*e)).collect();
    let pairing = -pairwise_sum(&dens) * phi.node_weight();
    let energy = |t: f64| phi.with_field(phi.field().axpy(t, &tangent)).normalized().energy();
    let (h1, h2) = DIRECTIONAL_STEPS;
    Ok(DirectionalCheck::new(first_derivative(energy, h1, h2), pairing))
}

/// `d/dt 𝓔(g_t, φ)` along the volume-preserving moduli deformation against
/// `−∫⟨Q₁, ġ⟩`.
pub fn metric_slot(phi: &SpinorField) -> Result<DirectionalCheck> {
    let metric = *phi.metric();
    let gdot = metric.deformation_velocity();
    let q1 = neg_gradient_general(phi).q1;
    let dens: Vec<f64> = q1.data().iter().map(|q| q.frob(gdot)).collect();
    let pairing = -pairwise_sum(&dens) * phi.node_weight();
    for t in [DIRECTIONAL_STEPS.0, -DIRECTIONAL_STEPS.0] {
        metric.deformed(t)?;
    }
    let energy = |t: f64| phi.with_metric(metric.deformed(t).expect("validated")).energy();
    let (h1, h2) = DIRECTIONAL_STEPS;
    Ok(DirectionalCheck::new(first_derivative(energy, h1, h2), pairing))
}
