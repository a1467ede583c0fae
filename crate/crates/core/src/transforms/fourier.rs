//! Fourier transform `F_s[f](z) = int f(x) exp(-i s (x1 z1 + x2 z2)) dx` on the
//! dual lattice of the input grid.
//!
//! With dual spacing `2 pi / (s n h)` the exponent factors exactly into a DFT
//! between half-integer-offset index sets, so the midpoint sum is evaluated by a
//! plain FFT with pre- and post-twiddles. The discrete Plancherel identity
//! `||F_s f||_2 = (2 pi / s) ||f||_2` then holds to rounding.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::Result;
use crate::field::ScalarField;

/// Forward transform, kernel `exp(-i s x.z)`.
pub fn fourier_transform(f: &ScalarField, scale: f64) -> Result<ScalarField> {
    transform(f, scale, -1.0)
}

/// Adjoint transform, kernel `exp(+i s x.z)`. Maps the dual lattice back onto
/// the original one, and `adjoint(forward(f)) = (2 pi / s)^2 f`.
pub fn adjoint_fourier_transform(f: &ScalarField, scale: f64) -> Result<ScalarField> {
    transform(f, scale, 1.0)
}

fn transform(f: &ScalarField, scale: f64, sign: f64) -> Result<ScalarField> {
    let grid = f.grid();
    let dual = grid.fourier_dual(scale)?;
    let n = grid.n();
    // twiddle(j) = exp(-sign * 2 pi i c j / n), c = (n - 1) / 2, reduced in integers
    let twiddle: Vec<Complex64> = (0..n)
        .map(|j| {
            let r = ((n - 1) * j) % (2 * n);
            Complex64::from_polar(1.0, -sign * PI * r as f64 / n as f64)
        })
        .collect();
    let r0 = ((n - 1) * (n - 1)) % (4 * n);
    // exp(sign * 2 pi i c^2 / n) for each axis
    let constant = Complex64::from_polar(1.0, 2.0 * sign * PI * r0 as f64 / (2.0 * n as f64));

    let mut planner = FftPlanner::new();
    let fft = if sign < 0.0 { planner.plan_fft_forward(n) } else { planner.plan_fft_inverse(n) };
    let mut buf: Vec<Complex64> = f
        .values()
        .iter()
        .enumerate()
        .map(|(i, v)| v * twiddle[i / n] * twiddle[i % n])
        .collect();
    fft.process(&mut buf);
    let mut t = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            t[k * n + j] = buf[j * n + k];
        }
    }
    fft.process(&mut t);
    let w = grid.cell_area();
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for k2 in 0..n {
        for k1 in 0..n {
            out[k1 * n + k2] = t[k2 * n + k1] * twiddle[k1] * twiddle[k2] * constant * w;
        }
    }
    Ok(ScalarField::from_raw(dual, out))
}
