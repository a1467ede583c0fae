//! Inverse scattering `S -> Q` through the d-bar equation in `z`.
//!
//! For fixed `x`, `m(x, .)` solves `m = 1 + C(Tm)` with
//! `Tm(z) = m(conj z) S(z) A(x, -conj z)`, and
//! `Q(x) = (1/pi) J int Tm(x, z) dz`, so that
//! `Q12 = (-i/pi) int m11(conj z) S12(z) a2(x, -conj z)` and
//! `Q21 = (i/pi) int m22(conj z) S21(z) a1(x, -conj z)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::field::{MatrixField, OffDiagPotential, ScalarField, Symmetry};
use crate::forward::{collect_offdiag, ScatteringData};
use crate::grid::GridSpec;
use crate::neumann::{in_pool, iterate, AlternatingOperator, JostSolution, NonConvergence, SolveOptions, SolveReport};
use crate::transforms::{a1, a2, adjoint_fourier_transform, fourier_transform, ConvScratch, SingularTransforms};

/// Kernel applied to the second row of `Tm`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CauchyRouting {
    /// `C` on every entry; `C` inverts d/d(conj z) on both rows.
    #[default]
    Uniform,
    /// `C` on row 1, `conj C conj` on row 2, mirroring `G`.
    RowConjugate,
}

/// `a1(x, -conj z)` and `a2(x, -conj z)` over the z-grid.
fn reflected_phases(zgrid: &GridSpec, x: Complex64) -> (Vec<Complex64>, Vec<Complex64>) {
    zgrid.points().map(|z| (a1(x, -z.conj()), a2(x, -z.conj()))).unzip()
}

/// `Tm` for a full matrix field in `z`, following the product order
/// `m(conj z) S(z) A(x, -conj z)` literally.
pub fn apply_t(m: &MatrixField, s: &OffDiagPotential, x: Complex64) -> Result<MatrixField> {
    let g = *s.grid();
    if !m.grid().same_as(&g) {
        return Err(crate::Error::GridMismatch(format!("m on {}, S on {}", m.grid(), g)));
    }
    let (p1, p2) = reflected_phases(&g, x);
    let refl: Vec<usize> = (0..g.len()).map(|i| g.conjugate_index(i)).collect();
    let entry = |f: &dyn Fn(usize) -> Complex64| ScalarField::from_raw(g, (0..g.len()).map(f).collect());
    let (s12, s21) = (s.q12().values(), s.q21().values());
    let (m11, m12, m21, m22) = (m.m11.values(), m.m12.values(), m.m21.values(), m.m22.values());
    Ok(MatrixField {
        m11: entry(&|i| m12[refl[i]] * s21[i] * p1[i]),
        m12: entry(&|i| m11[refl[i]] * s12[i] * p2[i]),
        m21: entry(&|i| m22[refl[i]] * s21[i] * p1[i]),
        m22: entry(&|i| m21[refl[i]] * s12[i] * p2[i]),
    })
}

/// `d -> C(T d)` at one fixed `x`.
struct DbarOperator<'a> {
    ops: &'a SingularTransforms,
    refl: &'a [usize],
    routing: CauchyRouting,
    /// `S21(z) a1(x, -conj z)` and `S12(z) a2(x, -conj z)`
    u1: Vec<Complex64>,
    u2: Vec<Complex64>,
    buf: Vec<Complex64>,
}

impl<'a> DbarOperator<'a> {
    fn new(ops: &'a SingularTransforms, refl: &'a [usize], s: &OffDiagPotential, x: Complex64, routing: CauchyRouting) -> Self {
        let (p1, p2) = reflected_phases(ops.grid(), x);
        let u1 = s.q21().values().iter().zip(&p1).map(|(a, b)| a * b).collect();
        let u2 = s.q12().values().iter().zip(&p2).map(|(a, b)| a * b).collect();
        Self { ops, refl, routing, u1, u2, buf: vec![Complex64::new(0.0, 0.0); refl.len()] }
    }

    fn row1(&self, out: &mut [Complex64], s: &mut ConvScratch) {
        self.ops.cauchy_raw(&self.buf, out, s);
    }

    fn row2(&self, out: &mut [Complex64], s: &mut ConvScratch) {
        match self.routing {
            CauchyRouting::Uniform => self.ops.cauchy_raw(&self.buf, out, s),
            CauchyRouting::RowConjugate => self.ops.anti_cauchy_raw(&self.buf, out, s),
        }
    }

    fn fill(&mut self, d: &[Complex64], u: &[Complex64]) {
        for ((b, &r), w) in self.buf.iter_mut().zip(self.refl).zip(u) {
            *b = d[r] * w;
        }
    }
}

impl AlternatingOperator for DbarOperator<'_> {
    fn diag_to_off(&mut self, d11: &[Complex64], d22: &[Complex64], o12: &mut [Complex64], o21: &mut [Complex64], s: &mut ConvScratch) {
        let u2 = std::mem::take(&mut self.u2);
        self.fill(d11, &u2);
        self.u2 = u2;
        self.row1(o12, s);
        let u1 = std::mem::take(&mut self.u1);
        self.fill(d22, &u1);
        self.u1 = u1;
        self.row2(o21, s);
    }

    fn off_to_diag(&mut self, d12: &[Complex64], d21: &[Complex64], o11: &mut [Complex64], o22: &mut [Complex64], s: &mut ConvScratch) {
        let u1 = std::mem::take(&mut self.u1);
        self.fill(d12, &u1);
        self.u1 = u1;
        self.row1(o11, s);
        let u2 = std::mem::take(&mut self.u2);
        self.fill(d21, &u2);
        self.u2 = u2;
        self.row2(o22, s);
    }
}

/// Inverse map for one set of scattering data; owns the z-grid kernel tables.
pub struct InverseScattering {
    s: OffDiagPotential,
    ops: SingularTransforms,
    refl: Vec<usize>,
    routing: CauchyRouting,
}

impl InverseScattering {
    pub fn new(s: OffDiagPotential) -> Self {
        Self::with_routing(s, CauchyRouting::default())
    }

    pub fn with_routing(s: OffDiagPotential, routing: CauchyRouting) -> Self {
        let g = *s.grid();
        let refl = (0..g.len()).map(|i| g.conjugate_index(i)).collect();
        Self { ops: SingularTransforms::new(g), s, refl, routing }
    }

    pub fn data(&self) -> &OffDiagPotential {
        &self.s
    }

    /// Solves `m = 1 + C(Tm)` in `z` at fixed `x`.
    pub fn solve_m_dbar(&self, x: Complex64, opts: &SolveOptions) -> std::result::Result<JostSolution, NonConvergence> {
        let g = *self.s.grid();
        let mut s = self.ops.scratch();
        let mut op = DbarOperator::new(&self.ops, &self.refl, &self.s, x, self.routing);
        let sol = iterate(&mut op, g.len(), g.cell_area(), Some(opts.tol), opts.max_iter, &mut s, |_, _, _| {}).into_solution(g);
        if sol.report.converged {
            Ok(sol)
        } else {
            Err(NonConvergence { partial: Box::new(sol) })
        }
    }

    fn solve_point(&self, x: Complex64, opts: &SolveOptions, s: &mut ConvScratch) -> (Complex64, Complex64, SolveReport) {
        let g = *self.s.grid();
        let mut op = DbarOperator::new(&self.ops, &self.refl, &self.s, x, self.routing);
        let raw = iterate(&mut op, g.len(), g.cell_area(), Some(opts.tol), opts.max_iter, s, |_, _, _| {});
        let w = g.cell_area() / PI;
        let i = Complex64::new(0.0, 1.0);
        let r = &self.refl;
        let q12: Complex64 = (0..g.len()).map(|k| raw.m[0][r[k]] * op.u2[k]).sum::<Complex64>() * (-i) * w;
        let q21: Complex64 = (0..g.len()).map(|k| raw.m[3][r[k]] * op.u1[k]).sum::<Complex64>() * i * w;
        (q12, q21, raw.report)
    }

    /// `Q(x)` at every point of `xgrid`, as a parallel map over `x`.
    pub fn reconstruct(&self, xgrid: &GridSpec, opts: &SolveOptions) -> Result<ScatteringData> {
        let results: Vec<_> = in_pool(opts.workers, || {
            (0..xgrid.len())
                .into_par_iter()
                .map_init(|| self.ops.scratch(), |s, idx| self.solve_point(xgrid.point_at(idx), opts, s))
                .collect()
        });
        collect_offdiag(*xgrid, results)
    }
}

pub fn solve_m_dbar(s: &OffDiagPotential, x: Complex64, opts: &SolveOptions) -> std::result::Result<JostSolution, NonConvergence> {
    InverseScattering::new(s.clone()).solve_m_dbar(x, opts)
}

pub fn reconstruct_potential(s: &OffDiagPotential, xgrid: &GridSpec, opts: &SolveOptions) -> Result<OffDiagPotential> {
    Ok(InverseScattering::new(s.clone()).reconstruct(xgrid, opts)?.s)
}

/// Leading-order inverse on `xgrid`: `Q12 = (-i/pi) F*_2[S12]` and
/// `Q21 = (i/pi) F_2[S21(conj .)]`. The data is zero-extended to the
/// scale-2 dual lattice of `xgrid`, which must contain its grid points.
pub fn linearized_inverse(s: &OffDiagPotential, xgrid: &GridSpec) -> Result<OffDiagPotential> {
    let full = xgrid.fourier_dual(2.0)?;
    let (zg, fg) = (s.grid(), full);
    if (zg.spacing() - fg.spacing()).abs() > 1e-9 * fg.spacing() || zg.n() > fg.n() || (fg.n() - zg.n()) % 2 != 0 {
        return Err(invalid(format!("z-grid {zg} is not a window of the dual lattice {fg}")));
    }
    let s = s.resample_nearest(&full);
    let i = Complex64::new(0.0, 1.0);
    let q12 = adjoint_fourier_transform(s.q12(), 2.0)?.scale(-i / PI);
    let q21 = fourier_transform(&s.q21().conjugated_argument(), 2.0)?.scale(i / PI);
    let (q12, q21) = (q12.resample_nearest(xgrid), q21.resample_nearest(xgrid));
    Ok(OffDiagPotential::from_parts(q12, q21, Symmetry::None))
}
