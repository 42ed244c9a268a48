//! In-place evaluation of `Q₂` and the energy for the flow.
//!
//! The rough Laplacian `∇*∇ = −Σ_{jk} (G⁻¹)_{jk} D_j D_k` is applied with the
//! composed nine-point stencil of `D∘D` along each axis, so it coincides with
//! the operator built from two first differences. The energy comes from the same
//! pass through `Σ|∇φ|² = Σ⟨φ, ∇*∇φ⟩` (the first difference is skew-adjoint).

use crate::algebra::Quaternion;
use crate::geometry::{pairwise_sum, FlatMetric, Grid};

/// First-difference weights at offsets `−2..=2`, in units of `1/h`.
const D1: [f64; 5] = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];

fn composed() -> [f64; 9] {
    let mut c = [0.0; 9];
    for (i, a) in D1.iter().enumerate() {
        for (j, b) in D1.iter().enumerate() {
            c[i + j] += a * b;
        }
    }
    c
}

#[derive(Debug, Clone)]
pub struct FlowKernel {
    n: usize,
    signs: [f64; 2],
    /// `−(G⁻¹)₁₁ (D∘D)` weights along rows of axis 0.
    w0: [f64; 9],
    /// `−(G⁻¹)₂₂ (D∘D)` weights along axis 1.
    w1: [f64; 9],
    /// `−2(G⁻¹)₁₂ D` weights for the mixed term, `None` for diagonal metrics.
    wx: Option<[f64; 5]>,
    d1: [f64; 5],
    weight: f64,
}

impl FlowKernel {
    pub fn new(grid: Grid, signs: [f64; 2], metric: &FlatMetric) -> Self {
        let n = grid.n();
        let nf = n as f64;
        let gi = metric.inverse_gram();
        let c = composed();
        let scale = |s: f64| c.map(|v| -s * v * nf * nf);
        let d1 = D1.map(|v| v * nf);
        let mixed = gi.m[0][1] + gi.m[1][0];
        let wx = (mixed != 0.0).then(|| D1.map(|v| -mixed * v * nf));
        let h = grid.h();
        FlowKernel {
            n,
            signs,
            w0: scale(gi.m[0][0]),
            w1: scale(gi.m[1][1]),
            wx,
            d1,
            weight: metric.density() * h * h,
        }
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Node weight `√det G · h²`.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    fn wrapped_row(&self, a: isize) -> (usize, f64) {
        let n = self.n as isize;
        if a < 0 {
            ((a + n) as usize, self.signs[0])
        } else if a >= n {
            ((a - n) as usize, self.signs[0])
        } else {
            (a as usize, 1.0)
        }
    }

    /// `out (+)= Σ_o w[o] src(· + o e₂)` along axis 1, `o` in `−K/2..=K/2`.
    ///
    /// Rows are viewed as `4N` doubles, so an offset of `o` nodes is a shift by
    /// `4o` and every interior tap is one contiguous axpy.
    #[inline(always)]
    fn along_rows<const K: usize>(&self, src: &[Quaternion], out: &mut [Quaternion], w: &[f64; K], accumulate: bool) {
        let n = self.n;
        let r = K / 2;
        let sign = self.signs[1];
        let m = 4 * (n - 2 * r);
        for (row, dst) in src.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
            let row_f: &[f64] = bytemuck::cast_slice(row);
            let dst_f: &mut [f64] = bytemuck::cast_slice_mut(dst);
            let inner = &mut dst_f[4 * r..4 * r + m];
            if !accumulate {
                inner.fill(0.0);
            }
            for (k, &wk) in w.iter().enumerate() {
                if wk == 0.0 {
                    continue;
                }
                for (o, &v) in inner.iter_mut().zip(&row_f[4 * k..4 * k + m]) {
                    *o += wk * v;
                }
            }
            for b in (0..r).chain(n - r..n) {
                let mut acc = Quaternion::ZERO;
                for (k, &wk) in w.iter().enumerate() {
                    let idx = b as isize + k as isize - r as isize;
                    let v = if idx < 0 {
                        row[(idx + n as isize) as usize] * sign
                    } else if idx >= n as isize {
                        row[(idx - n as isize) as usize] * sign
                    } else {
                        row[idx as usize]
                    };
                    acc += v * wk;
                }
                if accumulate {
                    dst[b] += acc;
                } else {
                    dst[b] = acc;
                }
            }
        }
    }

    /// `out += Σ_o w[o] src(· + o e₁)` along axis 0.
    #[inline(always)]
    fn across_rows<const K: usize>(&self, src: &[Quaternion], out: &mut [Quaternion], w: &[f64; K]) {
        let n = self.n;
        let r = (K / 2) as isize;
        let src_f: &[f64] = bytemuck::cast_slice(src);
        let out_f: &mut [f64] = bytemuck::cast_slice_mut(out);
        for (a, dst) in out_f.chunks_exact_mut(4 * n).enumerate() {
            for (k, &wk) in w.iter().enumerate() {
                if wk == 0.0 {
                    continue;
                }
                let (ra, s) = self.wrapped_row(a as isize + k as isize - r);
                let c = wk * s;
                for (d, &v) in dst.iter_mut().zip(&src_f[4 * n * ra..4 * n * (ra + 1)]) {
                    *d += c * v;
                }
            }
        }
    }

    /// `out = ∇*∇ src`; `tmp` is scratch of the same length.
    ///
    /// Uses 256-bit vector code when the CPU supports it. No floating-point
    /// contraction happens in either path, so both give identical bits.
    pub fn rough_laplacian(&self, src: &[Quaternion], out: &mut [Quaternion], tmp: &mut [Quaternion]) {
        #[cfg(target_arch = "x86_64")]
        if std::arch::is_x86_feature_detected!("avx2") {
            // SAFETY: the required CPU feature was detected at runtime.
            return unsafe { self.rough_laplacian_avx2(src, out, tmp) };
        }
        self.rough_laplacian_portable(src, out, tmp)
    }

    #[cfg(target_arch = "x86_64")]
    #[target_feature(enable = "avx2")]
    unsafe fn rough_laplacian_avx2(&self, src: &[Quaternion], out: &mut [Quaternion], tmp: &mut [Quaternion]) {
        self.rough_laplacian_portable(src, out, tmp)
    }

    #[inline(always)]
    fn rough_laplacian_portable(&self, src: &[Quaternion], out: &mut [Quaternion], tmp: &mut [Quaternion]) {
        self.along_rows(src, out, &self.w1, false);
        self.across_rows(src, out, &self.w0);
        if let Some(wx) = &self.wx {
            self.along_rows(src, tmp, &self.d1, false);
            self.across_rows(tmp, out, wx);
        }
    }

    /// Writes `Q₂ = ⟨∇*∇ψ, ψ⟩ψ/|ψ|² − ∇*∇ψ` into `q2` and returns the energy of
    /// `ψ`. `lap`, `tmp` and `dots` are scratch.
    pub fn gradient(
        &self,
        psi: &[Quaternion],
        q2: &mut [Quaternion],
        lap: &mut [Quaternion],
        tmp: &mut [Quaternion],
        dots: &mut [f64],
    ) -> f64 {
        self.rough_laplacian(psi, lap, tmp);
        for (((q, &l), &p), d) in q2.iter_mut().zip(lap.iter()).zip(psi).zip(dots.iter_mut()) {
            let dot = l.dot(p);
            *d = dot;
            *q = p * (dot / p.norm_sqr()) - l;
        }
        0.5 * pairwise_sum(dots) * self.weight
    }

    /// `(∫|v|²)^{1/2}`.
    pub fn l2_norm(&self, v: &[Quaternion], dots: &mut [f64]) -> f64 {
        for (d, q) in dots.iter_mut().zip(v) {
            *d = q.norm_sqr();
        }
        (pairwise_sum(dots) * self.weight).sqrt()
    }
}
