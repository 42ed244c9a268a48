use crate::algebra::Quaternion;
use crate::error::{Error, Result};
use crate::geometry::{pairwise_sum, FlatMetric, Grid, QuaternionField, SpinCharacter};
use rand::Rng;
use std::f64::consts::PI;

/// Deviation from unit length that is silently normalised away on construction.
pub const UNIT_SNAP_TOL: f64 = 1e-6;

/// ℍ-valued field on the grid, twisted by a spin character, together with the
/// flat metric it is measured in.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    field: QuaternionField,
    chi: SpinCharacter,
    metric: FlatMetric,
}

impl SpinorField {
    /// Unit spinor from samples. Values within `UNIT_SNAP_TOL` of unit length are
    /// normalised; anything further off is an error.
    pub fn unit(grid: Grid, chi: SpinCharacter, metric: FlatMetric, data: Vec<Quaternion>) -> Result<Self> {
        let dev = data.iter().map(|q| (q.norm() - 1.0).abs()).fold(0.0, f64::max);
        if !(dev <= UNIT_SNAP_TOL) {
            return Err(Error::NotUnit(dev));
        }
        let data = data.into_iter().map(Quaternion::normalize).collect();
        Self::raw(grid, chi, metric, data)
    }

    /// Arbitrary ℍ-valued twisted field; no normalisation.
    pub fn raw(grid: Grid, chi: SpinCharacter, metric: FlatMetric, data: Vec<Quaternion>) -> Result<Self> {
        let field = QuaternionField::from_vec(grid, chi.signs(), data)?;
        Ok(SpinorField { field, chi, metric })
    }

    pub fn from_field(field: QuaternionField, chi: SpinCharacter, metric: FlatMetric) -> Self {
        debug_assert_eq!(field.signs(), chi.signs());
        SpinorField { field, chi, metric }
    }

    /// Unit spinor sampled from a function of lattice coordinates.
    pub fn from_fn(
        grid: Grid,
        chi: SpinCharacter,
        metric: FlatMetric,
        f: impl Fn(crate::algebra::Vec2) -> Quaternion,
    ) -> Result<Self> {
        let data = (0..grid.len()).map(|i| f(grid.coord_of(i))).collect();
        Self::unit(grid, chi, metric, data)
    }

    /// The constant spinor `q` (requires the trivial character).
    pub fn constant(grid: Grid, metric: FlatMetric, q: Quaternion) -> Result<Self> {
        Self::unit(grid, SpinCharacter::TRIVIAL, metric, vec![q; grid.len()])
    }

    #[inline]
    pub fn grid(&self) -> Grid {
        self.field.grid()
    }

    #[inline]
    pub fn chi(&self) -> SpinCharacter {
        self.chi
    }

    #[inline]
    pub fn metric(&self) -> &FlatMetric {
        &self.metric
    }

    #[inline]
    pub fn field(&self) -> &QuaternionField {
        &self.field
    }

    #[inline]
    pub fn values(&self) -> &[Quaternion] {
        self.field.data()
    }

    /// Same samples measured in another metric.
    pub fn with_metric(&self, metric: FlatMetric) -> Self {
        SpinorField {
            field: self.field.clone(),
            chi: self.chi,
            metric,
        }
    }

    /// Same metric and twist, new samples.
    pub fn with_field(&self, field: QuaternionField) -> Self {
        SpinorField {
            field,
            chi: self.chi,
            metric: self.metric,
        }
    }

    /// Volume weight of one node, `√det G · h²`.
    pub fn node_weight(&self) -> f64 {
        let h = self.grid().h();
        self.metric.density() * h * h
    }

    /// `[∇_{e₁}φ, ∇_{e₂}φ]`.
    pub fn nabla(&self) -> [QuaternionField; 2] {
        self.field.frame_derivatives(&self.metric.frame)
    }

    /// Maximum of `||φ| − 1|`.
    pub fn unit_deviation(&self) -> f64 {
        self.values().iter().map(|q| (q.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// Pointwise `φ · c`.
    pub fn right_mul(&self, c: Quaternion) -> Self {
        self.with_field(self.field.map_twisted(|q| q * c))
    }

    /// Pointwise normalisation.
    pub fn normalized(&self) -> Self {
        self.with_field(self.field.map_twisted(Quaternion::normalize))
    }

    /// `𝓔(g, φ) = ½ ∫ |∇φ|²`.
    pub fn energy(&self) -> f64 {
        let [d1, d2] = self.nabla();
        let dens: Vec<f64> = d1
            .data()
            .iter()
            .zip(d2.data())
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .collect();
        0.5 * pairwise_sum(&dens) * self.node_weight()
    }
}

/// Smooth random ℍ-valued field with the twist of `chi`, built from `modes`
/// Fourier modes `e^{2πi n·s}`. Frequencies are integers in untwisted and
/// half-integers in twisted directions, with `|nⱼ| ≤ max_freq`.
pub fn random_twisted_field<R: Rng>(grid: Grid, chi: SpinCharacter, modes: usize, max_freq: f64, rng: &mut R) -> QuaternionField {
    let pick = |rng: &mut R, i: usize| -> f64 {
        let candidates: Vec<f64> = if chi.chi[i] == -1 {
            let k = max_freq.floor() as i32;
            (-k - 1..=k).map(|m| m as f64 + 0.5).filter(|v| v.abs() <= max_freq).collect()
        } else {
            let k = max_freq.floor() as i32;
            (-k..=k).map(|m| m as f64).collect()
        };
        candidates[rng.gen_range(0..candidates.len())]
    };
    let mut terms = Vec::with_capacity(modes);
    for _ in 0..modes {
        let n1 = pick(rng, 0);
        let n2 = pick(rng, 1);
        let mut q = || Quaternion::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let (a, b) = (q(), q());
        terms.push((n1, n2, a, b));
    }
    QuaternionField::from_fn_twisted(grid, chi.signs(), |s| {
        let mut v = Quaternion::ZERO;
        for &(n1, n2, a, b) in &terms {
            let (sn, cs) = (2.0 * PI * (n1 * s.x + n2 * s.y)).sin_cos();
            v += a * cs + b * sn;
        }
        v
    })
}

/// Amplitude of the random periodic factor in [`random_unit_spinor`].
pub const RANDOM_SPINOR_AMPLITUDE: f64 = 0.3;

/// Random smooth unit spinor `φ = e^{π(m·s)ω} · (q₀ + ε f)/|q₀ + ε f| · c`.
///
/// The carrier `e^{π(m·s)ω}` with `mⱼ = 1` exactly in the twisted directions
/// fixes the spin structure; `f` is a random periodic field from at most five
/// Fourier modes with `|nⱼ| ≤ 1`, `q₀` and `c` are random unit quaternions and
/// `ε = RANDOM_SPINOR_AMPLITUDE / modes`. Draws with `min|q₀ + εf| < ½` are
/// rejected.
pub fn random_unit_spinor<R: Rng>(grid: Grid, chi: SpinCharacter, metric: FlatMetric, rng: &mut R) -> SpinorField {
    let unit = |rng: &mut R| {
        Quaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
        .normalize()
    };
    let (q0, c, modes, f) = loop {
        let q0 = unit(rng);
        let c = unit(rng);
        let modes = rng.gen_range(3..=5);
        let f = random_twisted_field(grid, SpinCharacter::TRIVIAL, modes, 1.0, rng);
        let eps = RANDOM_SPINOR_AMPLITUDE / modes as f64;
        let min = f.data().iter().map(|&v| (q0 + v * eps).norm()).fold(f64::INFINITY, f64::min);
        if min >= 0.5 {
            break (q0, c, modes, f);
        }
    };
    let m = [(chi.chi[0] == -1) as u8 as f64, (chi.chi[1] == -1) as u8 as f64];
    let data = f
        .data()
        .iter()
        .enumerate()
        .map(|(idx, &v)| {
            let s = grid.coord_of(idx);
            let carrier = Quaternion::omega_exp(PI * (m[0] * s.x + m[1] * s.y));
            carrier * (q0 + v * (RANDOM_SPINOR_AMPLITUDE / modes as f64)).normalize() * c
        })
        .collect();
    let field = QuaternionField::from_vec(grid, chi.signs(), data).expect("grid");
    SpinorField::from_field(field, chi, metric)
}
