//! Forward scattering `Q -> S`.
//!
//! For each `z` the Jost matrix solves `m = 1 + G_z(Q m)` and the scattering data is
//! `S(z) = -(1/pi) J int E_z(Q m) dx`, with `J f = off(diag(-i, i) f)`. Written out,
//! `S12 = (i/pi) int q12 m22 conj(a1)` and `S21 = (-i/pi) int q21 m11 conj(a2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::field::{MatrixField, OffDiagPotential, ScalarField, Symmetry};
use crate::grid::GridSpec;
use crate::neumann::{in_pool, iterate, AlternatingOperator, JostSolution, NonConvergence, SolveOptions, SolveReport};
use crate::transforms::{a1, a2, ConvScratch, SingularTransforms};

/// `d -> G_z(Q d)` at one fixed `z`.
struct GreenOperator<'a> {
    ops: &'a SingularTransforms,
    q12: &'a [Complex64],
    q21: &'a [Complex64],
    a1: Vec<Complex64>,
    a2: Vec<Complex64>,
    /// `conj(a1) q12`, `conj(a2) q21`: the phases `E_z` puts on `(Q d)^{12}`, `(Q d)^{21}`
    w12: Vec<Complex64>,
    w21: Vec<Complex64>,
    buf: Vec<Complex64>,
}

impl<'a> GreenOperator<'a> {
    fn new(ops: &'a SingularTransforms, q: &'a OffDiagPotential, z: Complex64) -> Self {
        let grid = ops.grid();
        let a1: Vec<Complex64> = grid.points().map(|x| a1(x, z)).collect();
        let a2: Vec<Complex64> = grid.points().map(|x| a2(x, z)).collect();
        let (q12, q21) = (q.q12().values(), q.q21().values());
        let w12 = a1.iter().zip(q12).map(|(a, q)| a.conj() * q).collect();
        let w21 = a2.iter().zip(q21).map(|(a, q)| a.conj() * q).collect();
        Self { ops, q12, q21, a1, a2, w12, w21, buf: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }
}

impl AlternatingOperator for GreenOperator<'_> {
    fn diag_to_off(&mut self, d11: &[Complex64], d22: &[Complex64], o12: &mut [Complex64], o21: &mut [Complex64], s: &mut ConvScratch) {
        let g = self;
        // (Qd)^{12} = q12 d22 -> a1 C(conj(a1) q12 d22)
        for ((b, w), d) in g.buf.iter_mut().zip(&g.w12).zip(d22) {
            *b = w * d;
        }
        g.ops.cauchy_raw(&g.buf, o12, s);
        for (o, a) in o12.iter_mut().zip(&g.a1) {
            *o *= a;
        }
        // (Qd)^{21} = q21 d11 -> a2 conj-C(conj(a2) q21 d11)
        for ((b, w), d) in g.buf.iter_mut().zip(&g.w21).zip(d11) {
            *b = w * d;
        }
        g.ops.anti_cauchy_raw(&g.buf, o21, s);
        for (o, a) in o21.iter_mut().zip(&g.a2) {
            *o *= a;
        }
    }

    fn off_to_diag(&mut self, d12: &[Complex64], d21: &[Complex64], o11: &mut [Complex64], o22: &mut [Complex64], s: &mut ConvScratch) {
        let g = self;
        // diagonal results: E_z acts trivially
        for ((b, q), d) in g.buf.iter_mut().zip(g.q12).zip(d21) {
            *b = q * d;
        }
        g.ops.cauchy_raw(&g.buf, o11, s);
        for ((b, q), d) in g.buf.iter_mut().zip(g.q21).zip(d12) {
            *b = q * d;
        }
        g.ops.anti_cauchy_raw(&g.buf, o22, s);
    }
}

/// Scattering data on a z-grid with the per-point solve records.
#[derive(Debug, Clone)]
pub struct ScatteringData {
    pub s: OffDiagPotential,
    pub reports: Vec<SolveReport>,
}

/// Forward map for one potential; owns the kernel tables of its grid.
pub struct ForwardScattering {
    q: OffDiagPotential,
    ops: SingularTransforms,
}

impl ForwardScattering {
    pub fn new(q: OffDiagPotential) -> Self {
        let ops = SingularTransforms::new(*q.grid());
        Self { q, ops }
    }

    pub fn potential(&self) -> &OffDiagPotential {
        &self.q
    }

    pub fn transforms(&self) -> &SingularTransforms {
        &self.ops
    }

    /// Solves `m = 1 + G_z(Qm)` by fixed-point iteration from `m = 1`.
    pub fn solve_m(&self, z: Complex64, opts: &SolveOptions) -> std::result::Result<JostSolution, NonConvergence> {
        let mut s = self.ops.scratch();
        let mut op = GreenOperator::new(&self.ops, &self.q, z);
        let grid = *self.q.grid();
        let raw = iterate(&mut op, grid.len(), grid.cell_area(), Some(opts.tol), opts.max_iter, &mut s, |_, _, _| {});
        let sol = raw.into_solution(grid);
        if sol.report.converged {
            Ok(sol)
        } else {
            Err(NonConvergence { partial: Box::new(sol) })
        }
    }

    /// `||(G_z Q)^{2k}(1)^{11}||_4` for `k = 1..=kmax`.
    pub fn neumann_term_norms(&self, z: Complex64, kmax: usize) -> Result<Vec<f64>> {
        if kmax < 1 {
            return Err(invalid("kmax must be at least 1"));
        }
        let grid = *self.q.grid();
        let mut s = self.ops.scratch();
        let mut op = GreenOperator::new(&self.ops, &self.q, z);
        let mut norms = Vec::with_capacity(kmax);
        iterate(&mut op, grid.len(), grid.cell_area(), None, 2 * kmax, &mut s, |k, d11, _| {
            if k % 2 == 0 {
                let f = ScalarField::from_raw(grid, d11.to_vec());
                norms.push(f.lp_norm(4.0).expect("p = 4"));
            }
        });
        Ok(norms)
    }

    fn solve_point(&self, z: Complex64, opts: &SolveOptions, s: &mut ConvScratch) -> (Complex64, Complex64, SolveReport) {
        let grid = *self.q.grid();
        let mut op = GreenOperator::new(&self.ops, &self.q, z);
        let raw = iterate(&mut op, grid.len(), grid.cell_area(), Some(opts.tol), opts.max_iter, s, |_, _, _| {});
        let g = &op;
        let w = grid.cell_area() / PI;
        let i = Complex64::new(0.0, 1.0);
        let s12: Complex64 = g.w12.iter().zip(&raw.m[3]).map(|(a, b)| a * b).sum::<Complex64>() * i * w;
        let s21: Complex64 = g.w21.iter().zip(&raw.m[0]).map(|(a, b)| a * b).sum::<Complex64>() * (-i) * w;
        (s12, s21, raw.report)
    }

    /// `S(z)` at every point of `zgrid`. Per-point solves are independent and run
    /// as a parallel map; results do not depend on the worker count.
    pub fn scattering_data(&self, zgrid: &GridSpec, opts: &SolveOptions) -> Result<ScatteringData> {
        let results: Vec<(Complex64, Complex64, SolveReport)> = in_pool(opts.workers, || {
            (0..zgrid.len())
                .into_par_iter()
                .map_init(|| self.ops.scratch(), |s, idx| self.solve_point(zgrid.point_at(idx), opts, s))
                .collect()
        });
        collect_offdiag(*zgrid, results)
    }

    /// Single-point scattering data, `(S12(z), S21(z))`.
    pub fn scattering_at(&self, z: Complex64, opts: &SolveOptions) -> (Complex64, Complex64, SolveReport) {
        let mut s = self.ops.scratch();
        self.solve_point(z, opts, &mut s)
    }
}

/// Assembles per-point `(v12, v21, report)` triples, failing if any point did not converge.
pub(crate) fn collect_offdiag(grid: GridSpec, results: Vec<(Complex64, Complex64, SolveReport)>) -> Result<ScatteringData> {
    let failed: Vec<usize> = results.iter().enumerate().filter(|(_, r)| !r.2.converged).map(|(i, _)| i).collect();
    if !failed.is_empty() {
        let worst = failed.iter().map(|&i| results[i].2.final_residual).fold(0.0, f64::max);
        return Err(Error::NonConvergence { failed, total: results.len(), worst_residual: worst });
    }
    let mut v12 = Vec::with_capacity(results.len());
    let mut v21 = Vec::with_capacity(results.len());
    let mut reports = Vec::with_capacity(results.len());
    for (a, b, r) in results {
        v12.push(a);
        v21.push(b);
        reports.push(r);
    }
    let s = OffDiagPotential::from_parts(ScalarField::from_raw(grid, v12), ScalarField::from_raw(grid, v21), Symmetry::None);
    Ok(ScatteringData { s, reports })
}

pub fn solve_m(q: &OffDiagPotential, z: Complex64, opts: &SolveOptions) -> std::result::Result<JostSolution, NonConvergence> {
    ForwardScattering::new(q.clone()).solve_m(z, opts)
}

pub fn neumann_term_norms(q: &OffDiagPotential, z: Complex64, kmax: usize) -> Result<Vec<f64>> {
    ForwardScattering::new(q.clone()).neumann_term_norms(z, kmax)
}

pub fn scattering_data(q: &OffDiagPotential, zgrid: &GridSpec, opts: &SolveOptions) -> Result<ScatteringData> {
    ForwardScattering::new(q.clone()).scattering_data(zgrid, opts)
}

/// `||S(Qa) - S(Qb)||_2 / ||Qa - Qb||_2`, and 0 for identical inputs.
pub fn lipschitz_probe(qa: &OffDiagPotential, qb: &OffDiagPotential, zgrid: &GridSpec, opts: &SolveOptions) -> Result<f64> {
    let dq = qa.difference(qb).matrix_l2_norm();
    if dq == 0.0 {
        return Ok(0.0);
    }
    let sa = scattering_data(qa, zgrid, opts)?.s;
    let sb = scattering_data(qb, zgrid, opts)?.s;
    Ok(sa.difference(&sb).matrix_l2_norm() / dq)
}

/// Leading-order scattering data: `S12 = (i/pi) F_2[q12](z)` and
/// `S21 = (-i/pi) F_2[q21](-conj z)`, on the full scale-2 dual lattice.
pub fn linearized_scattering(q: &OffDiagPotential) -> Result<OffDiagPotential> {
    let f12 = crate::transforms::fourier_transform(q.q12(), 2.0)?;
    let f21 = crate::transforms::fourier_transform(q.q21(), 2.0)?;
    let i = Complex64::new(0.0, 1.0);
    let s12 = f12.scale(i / PI);
    // F(-conj z): reflect the first coordinate
    let s21 = f21.conjugated_argument().negated_argument().scale(-i / PI);
    Ok(OffDiagPotential::from_parts(s12, s21, Symmetry::None))
}

/// `||S21 - conj(S12(conj .))||_2 / ||S||_2`, the defect of the relation that the
/// linearization of a hermitian potential satisfies exactly. Reported, never asserted.
pub fn conjugation_defect(s: &OffDiagPotential) -> f64 {
    let partner = s.q12().conjugated_argument().conj();
    let norm = s.matrix_l2_norm();
    if norm == 0.0 {
        return 0.0;
    }
    (s.q21() - &partner).l2_norm() / norm
}

/// Series terms of `S` built from `(G Q G_z Q)^j (1)` with the generic
/// matrix-field operators. Returns the partial contributions to `(S12, S21)`
/// for `j = 0..terms`; used as an independent check of the fast solver.
pub fn scattering_series(q: &OffDiagPotential, z: Complex64, terms: usize) -> Vec<(Complex64, Complex64)> {
    let ops = SingularTransforms::new(*q.grid());
    let grid = *q.grid();
    let w = grid.cell_area();
    let i = Complex64::new(0.0, 1.0);
    let conj_a1 = ScalarField::from_fn(grid, |x| a1(x, z).conj());
    let conj_a2 = ScalarField::from_fn(grid, |x| a2(x, z).conj());
    let mut even = MatrixField::identity(grid);
    let mut out = Vec::with_capacity(terms);
    for _ in 0..terms {
        // -(2/pi) J int A(x,-z) Q even, with -(2/pi)J = diag(i/pi, -i/pi)
        let qm = even.left_mul_offdiag(q);
        let s12: Complex64 = (&conj_a1 * &qm.m12).values().iter().sum::<Complex64>() * w * i / PI;
        let s21: Complex64 = (&conj_a2 * &qm.m21).values().iter().sum::<Complex64>() * w * (-i) / PI;
        out.push((s12, s21));
        let odd = ops.apply_gz(&even.left_mul_offdiag(q), z);
        even = ops.apply_g(&odd.left_mul_offdiag(q));
    }
    out
}
