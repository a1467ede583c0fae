use std::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

use super::conv::PaddedFft;
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// `1 / (pi x)`
    Cauchy,
    /// `1 / |x|`
    Riesz,
}

/// Quadrature-weighted samples of a convolution kernel on the padded lattice,
/// kept as their FFT.
///
/// Off the origin the entry for a lattice difference `d` is `h^2 K(d)`. At the
/// origin it is the exact integral of `K` over one cell: zero for the odd
/// Cauchy kernel, `8 (h/2) ln(1 + sqrt 2)` for `1/|x|`.
#[derive(Clone)]
pub struct KernelTable {
    grid: GridSpec,
    kind: KernelKind,
    self_weight: f64,
    spectrum: Vec<Complex64>,
}

impl std::fmt::Debug for KernelTable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelTable")
            .field("grid", &self.grid)
            .field("kind", &self.kind)
            .field("self_weight", &self.self_weight)
            .finish()
    }
}

impl KernelTable {
    pub(crate) fn build(grid: GridSpec, kind: KernelKind, fft: &PaddedFft) -> Self {
        let n = grid.n() as i64;
        let m = fft.padded_len();
        let h = grid.spacing();
        let area = grid.cell_area();
        let self_weight = match kind {
            KernelKind::Cauchy => 0.0,
            KernelKind::Riesz => riesz_cell_integral(h),
        };
        let mut table = vec![Complex64::new(0.0, 0.0); m * m];
        for dj in -n..n {
            for dk in -n..n {
                let idx = dj.rem_euclid(m as i64) as usize * m + dk.rem_euclid(m as i64) as usize;
                table[idx] = if dj == 0 && dk == 0 {
                    Complex64::new(self_weight, 0.0)
                } else {
                    let w = Complex64::new(dj as f64 * h, dk as f64 * h);
                    match kind {
                        KernelKind::Cauchy => area / (PI * w),
                        KernelKind::Riesz => Complex64::new(area / w.norm(), 0.0),
                    }
                };
            }
        }
        Self { grid, kind, self_weight, spectrum: fft.full_spectrum(table) }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Integral of the kernel over the cell centered at the origin.
    pub fn self_weight(&self) -> f64 {
        self.self_weight
    }

    pub(crate) fn spectrum(&self) -> &[Complex64] {
        &self.spectrum
    }
}

/// `int_{[-h/2,h/2]^2} |x|^-1 dx`, by adaptive Simpson over the polar angle.
///
/// In polar coordinates the radial integral of `r^-1 * r` is the radial extent
/// itself, so the square splits into 8 triangles each contributing
/// `int_0^{pi/4} (h/2) sec(theta) d theta`.
pub fn riesz_cell_integral(h: f64) -> f64 {
    let a = 0.5 * h;
    let f = |t: f64| a / t.cos();
    8.0 * adaptive_simpson(&f, 0.0, FRAC_PI_4, 1e-13 * a, 40)
}

pub(crate) fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    fc: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + simpson_step(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn riesz_cell_weight_matches_closed_form() {
        for h in [1.0, 0.1, 0.0375] {
            let want = 4.0 * h * (1.0 + 2f64.sqrt()).ln();
            let got = riesz_cell_integral(h);
            assert!(((got - want) / want).abs() < 1e-10, "{got} {want}");
            assert!(got > 0.0);
        }
    }

    #[test]
    fn cauchy_self_weight_is_zero() {
        let g = GridSpec::new(1.0, 8).unwrap();
        let fft = PaddedFft::new(8);
        assert_eq!(KernelTable::build(g, KernelKind::Cauchy, &fft).self_weight(), 0.0);
    }
}
