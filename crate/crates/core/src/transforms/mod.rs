//! Singular integral operators on a truncated lattice: the solid Cauchy
//! transform and its conjugate, the Riesz potential `1/|x|`, the Green
//! operators `G` and `G_z`, the phase matrix `A(x, z)`, and the Fourier
//! transform. All convolutions are linear (2n zero padding), never circular.

mod conv;
mod fourier;
mod kernel;
mod phase;

use num_complex::Complex64;

pub use conv::ConvScratch;
pub use fourier::{adjoint_fourier_transform, fourier_transform};
pub use kernel::{riesz_cell_integral, KernelKind, KernelTable};
pub use phase::{a1, a2, apply_ez, apply_ez_with, phase_field, Direction, PhaseField};


use crate::field::{MatrixField, ScalarField};
use crate::grid::GridSpec;
use conv::PaddedFft;

/// Kernel tables and FFT plans for one grid. Build once, share read-only;
/// each concurrent caller brings its own [`ConvScratch`].
pub struct SingularTransforms {
    grid: GridSpec,
    fft: PaddedFft,
    cauchy: KernelTable,
    riesz: KernelTable,
}

impl SingularTransforms {
    pub fn new(grid: GridSpec) -> Self {
        let fft = PaddedFft::new(grid.n());
        let cauchy = KernelTable::build(grid, KernelKind::Cauchy, &fft);
        let riesz = KernelTable::build(grid, KernelKind::Riesz, &fft);
        Self { grid, fft, cauchy, riesz }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn cauchy_table(&self) -> &KernelTable {
        &self.cauchy
    }

    pub fn riesz_table(&self) -> &KernelTable {
        &self.riesz
    }

    pub fn scratch(&self) -> ConvScratch {
        self.fft.scratch()
    }

    fn check(&self, f: &ScalarField) {
        assert!(f.grid().same_as(&self.grid), "field on {} but transforms on {}", f.grid(), self.grid);
    }

    /// `(1/pi) h^2 sum_w f(w) / (z - w)`, self cell excluded.
    pub(crate) fn cauchy_raw(&self, input: &[Complex64], out: &mut [Complex64], s: &mut ConvScratch) {
        self.fft.convolve(self.cauchy.spectrum(), input, out, s);
    }

    /// `conj(C(conj f))`, the kernel `1 / (pi conj(x))`.
    pub(crate) fn anti_cauchy_raw(&self, input: &[Complex64], out: &mut [Complex64], s: &mut ConvScratch) {
        let mut tmp = std::mem::take(&mut s.tmp);
        for (t, v) in tmp.iter_mut().zip(input) {
            *t = v.conj();
        }
        self.fft.convolve(self.cauchy.spectrum(), &tmp, out, s);
        for o in out.iter_mut() {
            *o = o.conj();
        }
        s.tmp = tmp;
    }

    pub(crate) fn riesz_raw(&self, input: &[Complex64], out: &mut [Complex64], s: &mut ConvScratch) {
        self.fft.convolve(self.riesz.spectrum(), input, out, s);
    }

    fn run(&self, f: &ScalarField, op: impl Fn(&Self, &[Complex64], &mut [Complex64], &mut ConvScratch)) -> ScalarField {
        self.check(f);
        let mut out = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        let mut s = self.scratch();
        op(self, f.values(), &mut out, &mut s);
        ScalarField::from_raw(self.grid, out)
    }

    pub fn cauchy_transform(&self, f: &ScalarField) -> ScalarField {
        self.run(f, Self::cauchy_raw)
    }

    pub fn anti_cauchy_transform(&self, f: &ScalarField) -> ScalarField {
        self.run(f, Self::anti_cauchy_raw)
    }

    /// Discrete `R f(x) = int f(y) / |x - y| dy`; the self cell uses the exact cell integral.
    pub fn riesz_potential(&self, f: &ScalarField) -> ScalarField {
        let mut r = self.run(f, Self::riesz_raw);
        if f.values().iter().all(|v| v.im == 0.0) {
            // real input: drop FFT round-off in the imaginary part
            for v in r.values_mut() {
                v.im = 0.0;
            }
        }
        r
    }

    /// `G(F)`: first-row entries get the Cauchy transform, second-row entries the conjugate one.
    pub fn apply_g(&self, f: &MatrixField) -> MatrixField {
        MatrixField {
            m11: self.cauchy_transform(&f.m11),
            m12: self.cauchy_transform(&f.m12),
            m21: self.anti_cauchy_transform(&f.m21),
            m22: self.anti_cauchy_transform(&f.m22),
        }
    }

    /// `G_z = E_z^-1 G E_z`.
    pub fn apply_gz(&self, f: &MatrixField, z: Complex64) -> MatrixField {
        let p = phase_field(self.grid, z);
        let inner = apply_ez_with(f, &p, Direction::Forward);
        apply_ez_with(&self.apply_g(&inner), &p, Direction::Inverse)
    }
}

pub fn cauchy_transform(f: &ScalarField) -> ScalarField {
    SingularTransforms::new(*f.grid()).cauchy_transform(f)
}

pub fn anti_cauchy_transform(f: &ScalarField) -> ScalarField {
    SingularTransforms::new(*f.grid()).anti_cauchy_transform(f)
}

pub fn riesz_potential(f: &ScalarField) -> ScalarField {
    SingularTransforms::new(*f.grid()).riesz_potential(f)
}

pub fn apply_g(f: &MatrixField) -> MatrixField {
    SingularTransforms::new(*f.grid()).apply_g(f)
}

pub fn apply_gz(f: &MatrixField, z: Complex64) -> MatrixField {
    SingularTransforms::new(*f.grid()).apply_gz(f, z)
}

#[cfg(test)]
mod tests;
