use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};

/// Square, cell-centered lattice on `[-L, L]^2`.
///
/// Index `(j, k)` sits at `x = (-L + (j + 1/2) h) + i (-L + (k + 1/2) h)` with
/// `h = 2L / n`. The row index `j` runs along the real axis. Because the
/// lattice is cell-centered and `n` is even, it is closed under `x -> -x`
/// and `x -> conj(x)`, and no sample sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    half_width: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(invalid(format!("half width must be positive, got {half_width}")));
        }
        if n == 0 || n % 2 != 0 {
            return Err(invalid(format!("samples per axis must be positive and even, got {n}")));
        }
        Ok(Self { half_width, n })
    }

    /// Lattice dual to `self` under `exp(-i scale x.z)`, i.e. the output lattice
    /// of [`crate::transforms::fourier_transform`].
    pub fn fourier_dual(&self, scale: f64) -> Result<Self> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(invalid(format!("Fourier scale must be positive, got {scale}")));
        }
        GridSpec::new(PI / (scale * self.spacing()), self.n)
    }

    /// Centered `n_sub x n_sub` window of the scale-2 dual lattice. This is the
    /// default scattering-parameter grid: same spacing as the full dual, fewer points.
    pub fn dual_window(&self, n_sub: usize) -> Result<Self> {
        if n_sub > self.n {
            return Err(invalid(format!("dual window {n_sub} exceeds grid size {}", self.n)));
        }
        let dz = PI / (self.n as f64 * self.spacing());
        GridSpec::new(0.5 * n_sub as f64 * dz, n_sub)
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Quadrature weight of one cell.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    /// Coordinate of index `j` along one axis.
    pub fn coord(&self, j: usize) -> f64 {
        -self.half_width + (j as f64 + 0.5) * self.spacing()
    }

    pub fn point(&self, j: usize, k: usize) -> Complex64 {
        Complex64::new(self.coord(j), self.coord(k))
    }

    pub fn index(&self, j: usize, k: usize) -> usize {
        j * self.n + k
    }

    pub fn point_at(&self, idx: usize) -> Complex64 {
        self.point(idx / self.n, idx % self.n)
    }

    /// Linear index of `-x` for the point at `idx`.
    pub fn negated_index(&self, idx: usize) -> usize {
        let (j, k) = (idx / self.n, idx % self.n);
        self.index(self.n - 1 - j, self.n - 1 - k)
    }

    /// Linear index of `conj(x)` for the point at `idx`.
    pub fn conjugate_index(&self, idx: usize) -> usize {
        let (j, k) = (idx / self.n, idx % self.n);
        self.index(j, self.n - 1 - k)
    }

    /// Index of the cell containing the coordinate `c`, if it lies inside.
    pub fn nearest_index_1d(&self, c: f64) -> Option<usize> {
        let t = (c + self.half_width) / self.spacing();
        if t < 0.0 || t >= self.n as f64 {
            return None;
        }
        Some(t.floor() as usize)
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.len()).map(move |i| self.point_at(i))
    }

    /// Same lattice, allowing rounding noise in the half width (e.g. a dual of a dual).
    pub fn same_as(&self, other: &GridSpec) -> bool {
        self.n == other.n && (self.half_width - other.half_width).abs() <= 1e-12 * self.half_width
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "n={} L={}", self.n, self.half_width)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_zero() {
        assert!(GridSpec::new(1.0, 7).is_err());
        assert!(GridSpec::new(1.0, 0).is_err());
        assert!(GridSpec::new(0.0, 8).is_err());
        assert!(GridSpec::new(-1.0, 8).is_err());
    }

    #[test]
    fn spacing_times_n_is_width() {
        let g = GridSpec::new(6.0, 128).unwrap();
        assert_eq!(g.spacing() * 128.0, 12.0);
    }

    #[test]
    fn reflection_closure_is_exact() {
        let g = GridSpec::new(3.0, 12).unwrap();
        for idx in 0..g.len() {
            let x = g.point_at(idx);
            assert_eq!(g.point_at(g.negated_index(idx)), -x);
            assert_eq!(g.point_at(g.conjugate_index(idx)), x.conj());
        }
    }

    #[test]
    fn dual_window_shares_spacing() {
        let g = GridSpec::new(6.0, 128).unwrap();
        let full = g.fourier_dual(2.0).unwrap();
        let win = g.dual_window(48).unwrap();
        assert!((full.spacing() - win.spacing()).abs() < 1e-15);
        assert!((win.half_width() - 2.0 * PI).abs() < 1e-12);
        // window points coincide with dual lattice points
        let off = (128 - 48) / 2;
        assert!((full.coord(off) - win.coord(0)).abs() < 1e-12);
    }
}
