//! Linear convolution on an `n x n` lattice through a `2n x 2n` zero-padded FFT.
//!
//! Inputs occupy one quadrant of the padded buffer and only that quadrant of the
//! output is kept, so the first and last 1D passes skip the zero rows. Spectra
//! are stored transposed (`[k_second * m + k_first]`) to save a transpose per call.

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

const TRANSPOSE_BLOCK: usize = 16;

pub(crate) struct PaddedFft {
    n: usize,
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

/// Per-worker buffers for [`PaddedFft`].
pub struct ConvScratch {
    a: Vec<Complex64>,
    b: Vec<Complex64>,
    fft: Vec<Complex64>,
    pub(crate) tmp: Vec<Complex64>,
}

impl PaddedFft {
    pub(crate) fn new(n: usize) -> Self {
        let m = 2 * n;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self { n, m, forward, inverse, scratch_len }
    }

    pub(crate) fn padded_len(&self) -> usize {
        self.m
    }

    pub(crate) fn scratch(&self) -> ConvScratch {
        let z = Complex64::new(0.0, 0.0);
        ConvScratch {
            a: vec![z; self.m * self.m],
            b: vec![z; self.m * self.m],
            fft: vec![z; self.scratch_len],
            tmp: vec![z; self.n * self.n],
        }
    }

    /// Spectrum of a full `m x m` array (used once per kernel), transposed layout.
    pub(crate) fn full_spectrum(&self, mut data: Vec<Complex64>) -> Vec<Complex64> {
        let m = self.m;
        assert_eq!(data.len(), m * m);
        let mut fft_scratch = vec![Complex64::new(0.0, 0.0); self.scratch_len];
        self.forward.process_with_scratch(&mut data, &mut fft_scratch);
        let mut t = vec![Complex64::new(0.0, 0.0); m * m];
        transpose(&data, &mut t, m, m, m);
        self.forward.process_with_scratch(&mut t, &mut fft_scratch);
        t
    }

    /// `out[i] = sum_j kernel[i - j] input[j]`, with `kernel_hat` from [`Self::full_spectrum`].
    pub(crate) fn convolve(
        &self,
        kernel_hat: &[Complex64],
        input: &[Complex64],
        out: &mut [Complex64],
        s: &mut ConvScratch,
    ) {
        let (n, m) = (self.n, self.m);
        debug_assert_eq!(input.len(), n * n);
        debug_assert_eq!(out.len(), n * n);
        let zero = Complex64::new(0.0, 0.0);

        for j in 0..n {
            let row = &mut s.a[j * m..(j + 1) * m];
            row[..n].copy_from_slice(&input[j * n..(j + 1) * n]);
            row[n..].fill(zero);
        }
        self.forward.process_with_scratch(&mut s.a[..n * m], &mut s.fft);
        // rows n..m of `a` are zero: transpose only the live block
        transpose(&s.a[..n * m], &mut s.b, n, m, m);
        for k in 0..m {
            s.b[k * m + n..(k + 1) * m].fill(zero);
        }
        self.forward.process_with_scratch(&mut s.b, &mut s.fft);

        for (v, k) in s.b.iter_mut().zip(kernel_hat) {
            *v *= k;
        }

        self.inverse.process_with_scratch(&mut s.b, &mut s.fft);
        // back-transpose only the first n columns of each row
        transpose_prefix(&s.b, &mut s.a, m, n, m);
        self.inverse.process_with_scratch(&mut s.a[..n * m], &mut s.fft);

        let norm = 1.0 / (m * m) as f64;
        for j in 0..n {
            for (o, v) in out[j * n..(j + 1) * n].iter_mut().zip(&s.a[j * m..j * m + n]) {
                *o = v * norm;
            }
        }
    }
}

/// `dst[c * dst_stride + r] = src[r * cols + c]` for an `rows x cols` source.
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize, dst_stride: usize) {
    for rb in (0..rows).step_by(TRANSPOSE_BLOCK) {
        for cb in (0..cols).step_by(TRANSPOSE_BLOCK) {
            for r in rb..(rb + TRANSPOSE_BLOCK).min(rows) {
                for c in cb..(cb + TRANSPOSE_BLOCK).min(cols) {
                    dst[c * dst_stride + r] = src[r * cols + c];
                }
            }
        }
    }
}

/// Transpose of the first `keep` columns of an `rows x stride` source into `keep` rows.
fn transpose_prefix(src: &[Complex64], dst: &mut [Complex64], rows: usize, keep: usize, stride: usize) {
    for rb in (0..rows).step_by(TRANSPOSE_BLOCK) {
        for cb in (0..keep).step_by(TRANSPOSE_BLOCK) {
            for r in rb..(rb + TRANSPOSE_BLOCK).min(rows) {
                for c in cb..(cb + TRANSPOSE_BLOCK).min(keep) {
                    dst[c * stride + r] = src[r * stride + c];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_sum() {
        let n = 6;
        let m = 2 * n;
        let fft = PaddedFft::new(n);
        // arbitrary kernel on differences
        let kern = |dj: i64, dk: i64| Complex64::new((dj as f64).sin() + 0.1 * dk as f64, dj as f64 * 0.3 - (dk * dk) as f64);
        let mut table = vec![Complex64::new(0.0, 0.0); m * m];
        for dj in -(n as i64)..(n as i64) {
            for dk in -(n as i64)..(n as i64) {
                let idx = dj.rem_euclid(m as i64) as usize * m + dk.rem_euclid(m as i64) as usize;
                table[idx] = kern(dj, dk);
            }
        }
        let hat = fft.full_spectrum(table);
        let input: Vec<Complex64> =
            (0..n * n).map(|i| Complex64::new((i as f64 * 0.7).cos(), i as f64 * 0.01)).collect();
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        let mut s = fft.scratch();
        fft.convolve(&hat, &input, &mut out, &mut s);
        for i in 0..n {
            for j in 0..n {
                let mut want = Complex64::new(0.0, 0.0);
                for a in 0..n {
                    for b in 0..n {
                        want += kern(i as i64 - a as i64, j as i64 - b as i64) * input[a * n + b];
                    }
                }
                assert!((out[i * n + j] - want).norm() < 1e-11, "{i} {j}");
            }
        }
    }
}
