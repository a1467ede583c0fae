//! Fixed-point iteration shared by the forward (`m = 1 + G_z(Qm)`) and inverse
//! (`m = 1 + C(Tm)`) Jost problems.
//!
//! Both operators send diagonal matrices to off-diagonal ones and back, so
//! the iteration `m^{k+1} = 1 + K m^k` is run on its increments
//! `d_{k+1} = K d_k`, `d_0 = 1`. Each increment has only two nonzero entries,
//! which halves the number of convolutions per step. `m^k` is the running sum.

use num_complex::Complex64;
use serde::Serialize;

use crate::field::{entrywise_l4, MatrixField, ScalarField};
use crate::grid::GridSpec;
use crate::transforms::ConvScratch;

/// Convergence record of one fixed-point solve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub iterations: usize,
    /// Entrywise `L^4` norm of the last increment relative to that of `m`.
    pub final_residual: f64,
    pub converged: bool,
    /// Entrywise `L^4` norms of the increments `d_1, d_2, ...`.
    pub term_norms: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Worker threads for per-point parallel maps; `None` uses the global pool.
    pub workers: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 200, workers: None }
    }
}

impl SolveOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Jost matrix together with its convergence record.
#[derive(Debug, Clone)]
pub struct JostSolution {
    pub m: MatrixField,
    pub report: SolveReport,
}

/// A solve that reached `max_iter`; the partial iterate is kept.
#[derive(Debug, thiserror::Error)]
#[error("fixed point did not converge: residual {:.3e} after {} iterations", .partial.report.final_residual, .partial.report.iterations)]
pub struct NonConvergence {
    pub partial: Box<JostSolution>,
}

impl From<NonConvergence> for crate::Error {
    fn from(e: NonConvergence) -> Self {
        crate::Error::NonConvergence {
            failed: vec![0],
            total: 1,
            worst_residual: e.partial.report.final_residual,
        }
    }
}

/// A linear map that swaps diagonal and off-diagonal matrix fields.
pub(crate) trait AlternatingOperator {
    /// `(d11, d22) -> (d12, d21)`
    fn diag_to_off(&mut self, d11: &[Complex64], d22: &[Complex64], o12: &mut [Complex64], o21: &mut [Complex64], s: &mut ConvScratch);
    /// `(d12, d21) -> (d11, d22)`
    fn off_to_diag(&mut self, d12: &[Complex64], d21: &[Complex64], o11: &mut [Complex64], o22: &mut [Complex64], s: &mut ConvScratch);
}

/// Raw iterate in `[m11, m12, m21, m22]` order.
pub(crate) struct RawSolution {
    pub m: [Vec<Complex64>; 4],
    pub report: SolveReport,
}

impl RawSolution {
    pub fn into_solution(self, grid: GridSpec) -> JostSolution {
        let [m11, m12, m21, m22] = self.m;
        JostSolution {
            m: MatrixField {
                m11: ScalarField::from_raw(grid, m11),
                m12: ScalarField::from_raw(grid, m12),
                m21: ScalarField::from_raw(grid, m21),
                m22: ScalarField::from_raw(grid, m22),
            },
            report: self.report,
        }
    }
}

/// Runs the increment recursion. With `tol = None` exactly `max_iter` steps are taken.
pub(crate) fn iterate(
    op: &mut impl AlternatingOperator,
    len: usize,
    cell_area: f64,
    tol: Option<f64>,
    max_iter: usize,
    s: &mut ConvScratch,
    mut on_increment: impl FnMut(usize, &[Complex64], &[Complex64]),
) -> RawSolution {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = [vec![one; len], vec![zero; len], vec![zero; len], vec![one; len]];
    // increment: (first, second) = (d11, d22) on even steps, (d12, d21) on odd ones
    let mut cur = (vec![one; len], vec![one; len]);
    let mut next = (vec![zero; len], vec![zero; len]);
    let mut term_norms = Vec::new();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    let mut converged = false;

    for k in 1..=max_iter {
        let into_off = k % 2 == 1;
        if into_off {
            op.diag_to_off(&cur.0, &cur.1, &mut next.0, &mut next.1, s);
        } else {
            op.off_to_diag(&cur.0, &cur.1, &mut next.0, &mut next.1, s);
        }
        std::mem::swap(&mut cur, &mut next);
        let (ia, ib) = if into_off { (1, 2) } else { (0, 3) };
        for (mv, dv) in m[ia].iter_mut().zip(&cur.0) {
            *mv += dv;
        }
        for (mv, dv) in m[ib].iter_mut().zip(&cur.1) {
            *mv += dv;
        }
        on_increment(k, &cur.0, &cur.1);

        let dn = entrywise_l4([cur.0.as_slice(), cur.1.as_slice()].into_iter(), cell_area);
        let mn = entrywise_l4(m.iter().map(|v| v.as_slice()), cell_area);
        term_norms.push(dn);
        residual = if mn > 0.0 { dn / mn } else { dn };
        iterations = k;
        if let Some(t) = tol {
            if residual <= t {
                converged = true;
                break;
            }
        }
    }
    if tol.is_none() {
        converged = true;
    }
    RawSolution { m, report: SolveReport { iterations, final_residual: residual, converged, term_norms } }
}

/// Runs `f` on a dedicated pool of `workers` threads, or on the global pool.
pub(crate) fn in_pool<R: Send>(workers: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("thread pool")
            .install(f),
        None => f(),
    }
}
