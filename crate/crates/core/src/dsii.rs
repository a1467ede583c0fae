//! Davey-Stewartson II through the scattering transform:
//! `q(t) = Q(e^{-4 i t z1 z2} S(Q(0)))^{12}`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{invalid, Result};
use crate::field::{OffDiagPotential, ScalarField, Symmetry};
use crate::forward::ForwardScattering;
use crate::grid::GridSpec;
use crate::inverse::InverseScattering;
use crate::neumann::SolveOptions;

/// Sign of the exponent in the evolution multiplier `exp(sign * 4 i t z1 z2)`.
/// Fixed against the linear flow `q_t = i q_{x1 x2}`: with `S12 ~ F[q](2z)`
/// the Fourier symbol `-xi1 xi2` at `xi = 2z` gives `-4 z1 z2`.
pub const EVOLUTION_SIGN: f64 = -1.0;

fn multiplier(z: Complex64, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, EVOLUTION_SIGN * 4.0 * t * z.re * z.im)
}

/// Multiplies both entries of `S` by the unimodular evolution factor.
pub fn evolve_scattering(s: &OffDiagPotential, t: f64) -> OffDiagPotential {
    if t == 0.0 {
        return s.clone();
    }
    let grid = *s.grid();
    let mul: Vec<Complex64> = grid.points().map(|z| multiplier(z, t)).collect();
    let apply = |f: &ScalarField| ScalarField::from_raw(grid, f.values().iter().zip(&mul).map(|(a, b)| a * b).collect());
    OffDiagPotential::from_parts(apply(s.q12()), apply(s.q21()), s.symmetry())
}

/// Scattering solution for one initial datum; the forward map is done once.
pub struct DsiiSolver {
    xgrid: GridSpec,
    opts: SolveOptions,
    s0: OffDiagPotential,
    zero: bool,
}

impl DsiiSolver {
    pub fn new(q0: &ScalarField, zgrid: &GridSpec, opts: SolveOptions) -> Result<Self> {
        let xgrid = *q0.grid();
        let zero = q0.is_zero();
        let s0 = if zero {
            OffDiagPotential::zeros(*zgrid)
        } else {
            let q = OffDiagPotential::with_symmetry(q0.clone(), Symmetry::Hermitian);
            ForwardScattering::new(q).scattering_data(zgrid, &opts)?.s
        };
        Ok(Self { xgrid, opts, s0, zero })
    }

    pub fn initial_scattering(&self) -> &OffDiagPotential {
        &self.s0
    }

    /// `q(., t)` on the x-grid.
    pub fn solve(&self, t: f64) -> Result<ScalarField> {
        if self.zero {
            return Ok(ScalarField::zeros(self.xgrid));
        }
        let st = evolve_scattering(&self.s0, t);
        let q = InverseScattering::new(st).reconstruct(&self.xgrid, &self.opts)?.s;
        Ok(q.q12().clone())
    }
}

pub fn dsii_solve(q0: &ScalarField, t: f64, zgrid: &GridSpec, opts: &SolveOptions) -> Result<ScalarField> {
    DsiiSolver::new(q0, zgrid, *opts)?.solve(t)
}

/// `||q_a(t) - q_b(t)||_2 / ||q_a(0) - q_b(0)||_2`, 0 when the initial data agree.
pub fn continuity_experiment(q0a: &ScalarField, q0b: &ScalarField, t: f64, zgrid: &GridSpec, opts: &SolveOptions) -> Result<f64> {
    let d0 = (q0a - q0b).l2_norm();
    if d0 == 0.0 {
        return Ok(0.0);
    }
    let qa = dsii_solve(q0a, t, zgrid, opts)?;
    let qb = dsii_solve(q0b, t, zgrid, opts)?;
    Ok((&qa - &qb).l2_norm() / d0)
}

/// 2D periodic FFT helper on the x-grid, treating the box as a torus.
struct Spectral {
    grid: GridSpec,
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
}

impl Spectral {
    fn new(grid: GridSpec) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.n();
        Self { grid, fwd: planner.plan_fft_forward(n), inv: planner.plan_fft_inverse(n) }
    }

    /// Angular frequency of FFT bin `m`; the Nyquist bin maps to `-n/2`.
    fn freq(&self, m: usize) -> f64 {
        let n = self.grid.n();
        let s = if m < n / 2 { m as f64 } else { m as f64 - n as f64 };
        PI * s / self.grid.half_width()
    }

    fn transform(&self, data: &mut [Complex64], inverse: bool) {
        let n = self.grid.n();
        let plan = if inverse { &self.inv } else { &self.fwd };
        plan.process(data);
        let mut t = vec![Complex64::new(0.0, 0.0); n * n];
        transpose(data, &mut t, n);
        plan.process(&mut t);
        transpose(&t, data, n);
        if inverse {
            let s = 1.0 / (n * n) as f64;
            data.iter_mut().for_each(|v| *v *= s);
        }
    }

    /// Applies the Fourier multiplier `m(xi1, xi2)`.
    fn multiply(&self, f: &ScalarField, m: impl Fn(f64, f64) -> Complex64) -> ScalarField {
        let n = self.grid.n();
        let mut d = f.values().to_vec();
        self.transform(&mut d, false);
        for j in 0..n {
            let xi1 = self.freq(j);
            for k in 0..n {
                d[j * n + k] *= m(xi1, self.freq(k));
            }
        }
        self.transform(&mut d, true);
        ScalarField::from_raw(self.grid, d)
    }

    fn is_nyquist(&self, xi: f64) -> bool {
        (xi + PI * (self.grid.n() / 2) as f64 / self.grid.half_width()).abs() < 1e-9
    }

    /// `d^2 f / dx1 dx2`; the Nyquist bins of odd derivatives are dropped.
    fn mixed_derivative(&self, f: &ScalarField) -> ScalarField {
        self.multiply(f, |a, b| {
            if self.is_nyquist(a) || self.is_nyquist(b) {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(-a * b, 0.0)
            }
        })
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    for j in 0..n {
        for k in 0..n {
            dst[k * n + j] = src[j * n + k];
        }
    }
}

/// Exact solution of the linear flow `q_t = i q_{x1 x2}` on the periodic box.
pub fn linear_flow(q0: &ScalarField, t: f64) -> ScalarField {
    let sp = Spectral::new(*q0.grid());
    sp.multiply(q0, |a, b| Complex64::from_polar(1.0, -t * a * b))
}

/// `r` with `Laplacian r = (|q|^2)_{x1 x2}` and zero mean.
pub fn mean_field(q: &ScalarField) -> ScalarField {
    let sp = Spectral::new(*q.grid());
    let rho = q.map(|v| Complex64::new(v.norm_sqr(), 0.0));
    let r = sp.multiply(&rho, |a, b| {
        let k2 = a * a + b * b;
        if k2 == 0.0 || sp.is_nyquist(a) || sp.is_nyquist(b) {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(a * b / k2, 0.0)
        }
    });
    // the source is real, so is r
    r.map(|v| Complex64::new(v.re, 0.0))
}

/// Pointwise residual `q_t - i q_{x1 x2} + 4 i r q` at the middle snapshot,
/// with `q_t` by central difference across it.
pub fn dsii_residual_field(snapshots: &[ScalarField], dt: f64) -> Result<ScalarField> {
    if snapshots.len() < 3 {
        return Err(invalid(format!("need at least 3 snapshots, got {}", snapshots.len())));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(invalid("dt must be positive"));
    }
    let grid = *snapshots[0].grid();
    if snapshots.iter().any(|s| !s.grid().same_as(&grid)) {
        return Err(crate::Error::GridMismatch("snapshots live on different grids".into()));
    }
    let mid = snapshots.len() / 2;
    let (prev, q, next) = (&snapshots[mid - 1], &snapshots[mid], &snapshots[mid + 1]);
    let qt = (next - prev).scale(Complex64::new(0.5 / dt, 0.0));
    let sp = Spectral::new(grid);
    let qxy = sp.mixed_derivative(q);
    let r = mean_field(q);
    let i = Complex64::new(0.0, 1.0);
    Ok(ScalarField::from_raw(
        grid,
        (0..grid.len())
            .map(|k| qt.values()[k] - i * qxy.values()[k] + 4.0 * i * r.values()[k] * q.values()[k])
            .collect(),
    ))
}

/// `||residual||_2 / ||q||_2` at the middle snapshot; 0 for `q = 0`.
pub fn dsii_residual(snapshots: &[ScalarField], dt: f64) -> Result<f64> {
    let res = dsii_residual_field(snapshots, dt)?;
    let norm = snapshots[snapshots.len() / 2].l2_norm();
    Ok(if norm == 0.0 { 0.0 } else { res.l2_norm() / norm })
}

/// Self-convergence of the residual in `dt`: with residual fields `R(dt)`,
/// `R(dt/2)`, `R(dt/4)` centered at `t`, returns
/// `log2(||R(dt) - R(dt/2)|| / ||R(dt/2) - R(dt/4)||)`, which is 2 for a
/// second-order difference. Five-point snapshot sets reuse the center.
pub fn residual_convergence_order(solver: &DsiiSolver, t: f64, dt: f64) -> Result<(f64, [f64; 3])> {
    let center = solver.solve(t)?;
    let mut fields = Vec::new();
    let mut rel = [0.0; 3];
    for (i, h) in [dt, dt / 2.0, dt / 4.0].into_iter().enumerate() {
        let snaps = [solver.solve(t - h)?, center.clone(), solver.solve(t + h)?];
        rel[i] = dsii_residual(&snaps, h)?;
        fields.push(dsii_residual_field(&snaps, h)?);
    }
    let a = (&fields[0] - &fields[1]).l2_norm();
    let b = (&fields[1] - &fields[2]).l2_norm();
    Ok(((a / b).log2(), rel))
}

#[cfg(test)]
mod tests;
