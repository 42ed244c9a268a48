//! Willmore energies `𝒲 = ½∫H² dA` of surfaces of revolution: the handle model
//! built from a catenoid, a circular arc and a flat annulus, and the product
//! tori used as building blocks for almost-minimisers.

use crate::error::{Error, Result};
use gauss_quad::GaussLegendre;
use serde::Serialize;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

/// Gauss–Legendre nodes per panel.
pub const QUAD_NODES: usize = 32;
/// Absolute tolerance of the adaptive panel refinement.
pub const QUAD_TOL: f64 = 1e-13;
const MAX_DEPTH: usize = 30;

fn rule() -> GaussLegendre {
    GaussLegendre::new(NonZeroUsize::new(QUAD_NODES).expect("nonzero"))
}

/// Adaptive composite Gauss–Legendre quadrature: a panel is accepted once its
/// value agrees with the sum over its two halves.
pub fn integrate_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let rule = rule();
    let whole = rule.integrate(a, b, f);
    refine(&rule, f, a, b, whole, 0)
}

fn refine(rule: &GaussLegendre, f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: f64, depth: usize) -> f64 {
    let m = 0.5 * (a + b);
    let left = rule.integrate(a, m, f);
    let right = rule.integrate(m, b, f);
    if (left + right - whole).abs() <= QUAD_TOL * whole.abs().max(1.0) || depth >= MAX_DEPTH {
        left + right
    } else {
        refine(rule, f, a, m, left, depth + 1) + refine(rule, f, m, b, right, depth + 1)
    }
}

/// Plain composite rule with `panels` equal panels (used for refinement checks).
pub fn integrate_composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let rule = rule();
    let w = (b - a) / panels as f64;
    (0..panels)
        .map(|k| rule.integrate(a + k as f64 * w, a + (k + 1) as f64 * w, f))
        .sum()
}

/// Position, velocity and acceleration of a profile curve at one parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    pub pos: [f64; 2],
    pub vel: [f64; 2],
    pub acc: [f64; 2],
}

/// One smooth piece of the handle profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Piece {
    /// `(arsinh u, √(1+u²))`.
    Catenoid,
    /// `(a, b) + R(cos θ, sin θ)`, `θ = (u−L)/R − α`.
    Arc,
    /// `(a + R, b + u − (L + αR))`.
    Ray,
}

/// Arclength profile `u ↦ (γ₁, γ₂)` of the handle for a given `L > 0`, with
/// the ray truncated at `γ₂ = 2b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HandleProfile {
    pub l: f64,
    pub a: f64,
    pub b: f64,
    pub r: f64,
    pub alpha: f64,
}

impl HandleProfile {
    pub fn new(l: f64) -> Result<Self> {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameter(format!("L must be positive, got {l}")));
        }
        let s = (1.0 + l * l).sqrt();
        Ok(HandleProfile {
            l,
            a: l.asinh() - l * s,
            b: 2.0 * s,
            r: 1.0 + l * l,
            alpha: (1.0 / s).asin(),
        })
    }

    /// Breakpoints `0, L, L + αR, L + αR + b`.
    pub fn breakpoints(&self) -> [f64; 4] {
        let u2 = self.l + self.alpha * self.r;
        [0.0, self.l, u2, u2 + self.b]
    }

    pub fn pieces(&self) -> [(Piece, f64, f64); 3] {
        let [u0, u1, u2, u3] = self.breakpoints();
        [(Piece::Catenoid, u0, u1), (Piece::Arc, u1, u2), (Piece::Ray, u2, u3)]
    }

    /// Jet of one piece, evaluated by its own formula (also outside its range).
    pub fn jet(&self, piece: Piece, u: f64) -> Jet {
        match piece {
            Piece::Catenoid => {
                let q = 1.0 + u * u;
                let s = q.sqrt();
                let q32 = q * s;
                Jet {
                    pos: [u.asinh(), s],
                    vel: [1.0 / s, u / s],
                    acc: [-u / q32, 1.0 / q32],
                }
            }
            Piece::Arc => {
                let t = (u - self.l) / self.r - self.alpha;
                let (sn, cs) = t.sin_cos();
                Jet {
                    pos: [self.a + self.r * cs, self.b + self.r * sn],
                    vel: [-sn, cs],
                    acc: [-cs / self.r, -sn / self.r],
                }
            }
            Piece::Ray => {
                let u2 = self.l + self.alpha * self.r;
                Jet {
                    pos: [self.a + self.r, self.b + u - u2],
                    vel: [0.0, 1.0],
                    acc: [0.0, 0.0],
                }
            }
        }
    }

    pub fn piece_at(&self, u: f64) -> Piece {
        let [_, u1, u2, _] = self.breakpoints();
        if u <= u1 {
            Piece::Catenoid
        } else if u <= u2 {
            Piece::Arc
        } else {
            Piece::Ray
        }
    }

    /// Largest `||γ′| − 1|` over `samples` equispaced parameters.
    pub fn unit_speed_residual(&self, samples: usize) -> f64 {
        let u3 = self.breakpoints()[3];
        (0..samples)
            .map(|k| {
                let u = u3 * k as f64 / (samples - 1).max(1) as f64;
                let v = self.jet(self.piece_at(u), u).vel;
                ((v[0] * v[0] + v[1] * v[1]).sqrt() - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Position and tangent jumps at the two interior breakpoints.
    pub fn c1_jumps(&self) -> [f64; 2] {
        let [_, u1, u2, _] = self.breakpoints();
        let jump = |p: Piece, q: Piece, u: f64| {
            let (a, b) = (self.jet(p, u), self.jet(q, u));
            let d = |x: [f64; 2], y: [f64; 2]| (x[0] - y[0]).hypot(x[1] - y[1]);
            d(a.pos, b.pos).max(d(a.vel, b.vel))
        };
        [jump(Piece::Catenoid, Piece::Arc, u1), jump(Piece::Arc, Piece::Ray, u2)]
    }
}

/// Mean curvature `H = (γ₁′/γ₂ − κ)/2` of the surface of revolution about the
/// `x₁`-axis, with `κ = γ₁′γ₂″ − γ₂′γ₁″` and unit-speed profile.
pub fn mean_curvature(j: &Jet) -> Result<f64> {
    if !(j.pos[1] > 0.0) {
        return Err(Error::InvalidParameter(format!("profile meets the axis (γ₂ = {})", j.pos[1])));
    }
    let kappa = j.vel[0] * j.acc[1] - j.vel[1] * j.acc[0];
    Ok(0.5 * (j.vel[0] / j.pos[1] - kappa))
}

/// `½ H² · 2πγ₂`, the Willmore density per unit arclength.
pub fn willmore_density(j: &Jet) -> Result<f64> {
    let h = mean_curvature(j)?;
    Ok(PI * h * h * j.pos[1])
}

/// Willmore energy of one piece.
pub fn willmore_piece(profile: &HandleProfile, piece: Piece, u0: f64, u1: f64) -> Result<f64> {
    // reject axis crossings up front so the quadrature closure can unwrap
    for k in 0..=16 {
        let u = u0 + (u1 - u0) * k as f64 / 16.0;
        mean_curvature(&profile.jet(piece, u))?;
    }
    let f = |u: f64| willmore_density(&profile.jet(piece, u)).unwrap_or(f64::NAN);
    Ok(integrate_adaptive(&f, u0, u1))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HandleWillmore {
    pub l: f64,
    pub doubled: bool,
    pub catenoid: f64,
    pub arc: f64,
    pub ray: f64,
    pub total: f64,
}

/// Willmore energy of the handle surface of revolution; `doubled` reflects it
/// across `{x₁ = 0}` (twice the energy).
pub fn willmore_revolution(profile: &HandleProfile, doubled: bool) -> Result<HandleWillmore> {
    let [(p0, a0, b0), (p1, a1, b1), (p2, a2, b2)] = profile.pieces();
    let f = if doubled { 2.0 } else { 1.0 };
    let catenoid = f * willmore_piece(profile, p0, a0, b0)?;
    let arc = f * willmore_piece(profile, p1, a1, b1)?;
    let ray = f * willmore_piece(profile, p2, a2, b2)?;
    Ok(HandleWillmore {
        l: profile.l,
        doubled,
        catenoid,
        arc,
        ray,
        total: catenoid + arc + ray,
    })
}

/// Closed-form value `π/√(1+L²)` attributed to the undoubled handle.
pub fn handle_willmore_claim(l: f64) -> f64 {
    PI / (1.0 + l * l).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NeckDistance {
    pub l: f64,
    /// `2(a + R)/(2b)`.
    pub from_profile: f64,
    /// `½(arsinh L/√(1+L²) + √(1+L²) − L)`.
    pub closed_form: f64,
    pub residual: f64,
}

/// Distance between the flat annuli of the doubled handle rescaled to radius
/// one, from the profile constants and from the closed form.
pub fn handle_neck_distance(l: f64) -> Result<NeckDistance> {
    let p = HandleProfile::new(l)?;
    let from_profile = 2.0 * (p.a + p.r) / (2.0 * p.b);
    let s = (1.0 + l * l).sqrt();
    // √(1+L²) − L in cancellation-free form
    let closed_form = 0.5 * (l.asinh() / s + 1.0 / (s + l));
    Ok(NeckDistance {
        l,
        from_profile,
        closed_form,
        residual: (from_profile - closed_form).abs(),
    })
}

/// `½∫(κ/2)² dA` over the product of a circle of radius `r` with a circle of
/// length `δ`, by quadrature over the parametrised cross-section.
pub fn willmore_product_torus(r: f64, delta: f64) -> Result<f64> {
    if !(r > 0.0) || !(delta > 0.0) {
        return Err(Error::InvalidParameter(format!("r and delta must be positive, got {r}, {delta}")));
    }
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        let (v, a) = ([-r * s, r * c], [-r * c, -r * s]);
        let speed = v[0].hypot(v[1]);
        let kappa = (v[0] * a[1] - v[1] * a[0]) / speed.powi(3);
        0.5 * (0.5 * kappa).powi(2) * speed * delta
    };
    Ok(integrate_adaptive(&f, 0.0, 2.0 * PI))
}

/// Closed form `πδ/(4r)`.
pub fn product_torus_closed_form(r: f64, delta: f64) -> f64 {
    PI * delta / (4.0 * r)
}

/// `Σ 2π/√(1+Lᵢ²) + base + π|γ−1|`: energy bookkeeping of the glued surface of
/// genus `γ` with `γ−1` handles. Each handle enters through the closed-form
/// bound `2π/√(1+L²)`, which dominates its actual Willmore energy.
pub fn almost_minimiser_energy(gamma: u32, handle_ls: &[f64], base_willmore: f64) -> Result<f64> {
    if gamma < 1 {
        return Err(Error::InvalidParameter("genus must be at least 1".into()));
    }
    let expected = (gamma - 1) as usize;
    if handle_ls.len() != expected {
        return Err(Error::HandleCount {
            gamma,
            expected,
            got: handle_ls.len(),
        });
    }
    if let Some(l) = handle_ls.iter().find(|l| !(**l > 0.0)) {
        return Err(Error::InvalidParameter(format!("handle parameter must be positive, got {l}")));
    }
    if !(base_willmore >= 0.0) {
        return Err(Error::InvalidParameter(format!("base energy must be non-negative, got {base_willmore}")));
    }
    let handles: f64 = handle_ls.iter().map(|l| 2.0 * handle_willmore_claim(*l)).sum();
    Ok(handles + base_willmore + PI * (gamma as f64 - 1.0).abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlmostMinimiser {
    pub gamma: u32,
    pub handle_ls: Vec<f64>,
    pub base_willmore: f64,
    pub energy: f64,
    pub infimum: f64,
}

/// Chooses handle parameters and a product-torus base with total excess below
/// `eps`: half the budget for the handles, a quarter for the base.
pub fn almost_minimiser_parameters(gamma: u32, eps: f64) -> Result<AlmostMinimiser> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let k = gamma.saturating_sub(1) as f64;
    let handle_ls = if k > 0.0 {
        // 2π/√(1+L²) ≤ eps/(2k)
        let target = eps / (2.0 * k);
        let l = ((2.0 * PI / target).powi(2) - 1.0).max(0.0).sqrt().ceil().max(1.0);
        vec![l; k as usize]
    } else {
        Vec::new()
    };
    let base_willmore = willmore_product_torus(1.0, eps / PI)?;
    let energy = almost_minimiser_energy(gamma, &handle_ls, base_willmore)?;
    Ok(AlmostMinimiser {
        gamma,
        handle_ls,
        base_willmore,
        energy,
        infimum: PI * k,
    })
}
