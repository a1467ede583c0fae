//! Numerical experiments on the estimate machinery: exponent sequences, the
//! multilinear forms `I_k`, one Hölder/HLS reduction step, and HLS ratios.

mod exponents;
mod multilinear;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::potential::random_smooth_field;
use crate::transforms::SingularTransforms;

pub use exponents::{exponent_sequence, ExponentSequence, IdentityCheck};
pub use multilinear::brute_force_ik;

/// Sharp constant of `R: L^{4/3} -> L^4` in the plane.
pub const SHARP_HLS_CONSTANT: f64 = 3.544_907_701_811_032; // 2 sqrt(pi)

/// `||R|f| ||_{p~} / ||f||_p` with `1/p~ = 1/p - 1/2`.
pub fn hls_ratio(f: &ScalarField, p: f64) -> Result<f64> {
    hls_ratio_with(&SingularTransforms::new(*f.grid()), f, p)
}

pub fn hls_ratio_with(ops: &SingularTransforms, f: &ScalarField, p: f64) -> Result<f64> {
    if !(p > 1.0 && p < 2.0) {
        return Err(invalid(format!("p = {p} must lie in (1, 2)")));
    }
    let p_tilde = 1.0 / (1.0 / p - 0.5);
    let denom = f.lp_norm(p)?;
    if denom == 0.0 {
        return Ok(0.0);
    }
    let rf = ops.riesz_potential(&f.abs());
    Ok(rf.lp_norm(p_tilde)? / denom)
}

fn real_power(f: &ScalarField, e: f64) -> ScalarField {
    f.map(|v| Complex64::new(v.re.max(0.0).powf(e), 0.0))
}

/// Output of one reduction step `I_k(t, q_0, q_1, ...) <= I_{k-1}(t_1, q_2 q~_2, ...)`.
#[derive(Debug, Clone)]
pub struct InductiveStep {
    /// `[R(t^r)]^{1/r}`
    pub t1: ScalarField,
    /// `R(q_1 [R(q_0^{r'})]^{1/r'})`
    pub q2_tilde: ScalarField,
}

/// One step of the Holder reduction at level `j`, with `r = r_j`.
pub fn inductive_step(t: &ScalarField, q0: &ScalarField, q1: &ScalarField, j: usize) -> Result<InductiveStep> {
    for f in [t, q0, q1] {
        if !f.is_nonnegative_real() {
            return Err(invalid("inductive step inputs must be nonnegative"));
        }
    }
    let seq = exponent_sequence(j + 1)?;
    let (r, rc) = (seq.r_f64(j), seq.r_conj_f64(j));
    let ops = SingularTransforms::new(*t.grid());
    let t1 = real_power(&ops.riesz_potential(&real_power(t, r)), 1.0 / r);
    let inner = real_power(&ops.riesz_potential(&real_power(q0, rc)), 1.0 / rc);
    let g = q1 * &inner;
    let q2_tilde = real_power(&ops.riesz_potential(&g), 1.0);
    Ok(InductiveStep { t1, q2_tilde })
}

/// Observed norms against the contracts of one step.
#[derive(Debug, Clone, Serialize)]
pub struct StepBounds {
    pub j: usize,
    /// `||t_1||_{p_(j+1)}` and `alpha^{1/r_j} ||t||_{p_j}`
    pub t1_norm: f64,
    pub t1_bound: f64,
    /// `||q~_2||_{s~_(j+1)}` and `alpha^{1/r'_j} alpha_hat ||q_1||_2 ||q_0||_{s_j}`
    pub q2_norm: f64,
    pub q2_bound: f64,
    /// empirical HLS ratio of `q_1 [R(q_0^{r'})]^{1/r'}` at `p = s_(j+1)`
    pub alpha_hat: f64,
}

impl StepBounds {
    pub fn holds(&self, slack: f64) -> bool {
        self.t1_norm <= self.t1_bound * (1.0 + slack) && self.q2_norm <= self.q2_bound * (1.0 + slack)
    }
}

/// Evaluates the norm contracts of `inductive_step` with HLS constant `alpha`.
pub fn step_bounds(t: &ScalarField, q0: &ScalarField, q1: &ScalarField, j: usize, alpha: f64) -> Result<StepBounds> {
    let step = inductive_step(t, q0, q1, j)?;
    let seq = exponent_sequence(j + 1)?;
    let (r, rc) = (seq.r_f64(j), seq.r_conj_f64(j));
    let ops = SingularTransforms::new(*t.grid());
    let inner = real_power(&ops.riesz_potential(&real_power(q0, rc)), 1.0 / rc);
    let alpha_hat = hls_ratio_with(&ops, &(q1 * &inner), seq.s_f64(j + 1))?;
    Ok(StepBounds {
        j,
        t1_norm: step.t1.lp_norm(seq.p_f64(j + 1))?,
        t1_bound: alpha.powf(1.0 / r) * t.lp_norm(seq.p_f64(j))?,
        q2_norm: step.q2_tilde.lp_norm(seq.s_tilde_f64(j + 1))?,
        q2_bound: alpha.powf(1.0 / rc) * alpha_hat * q1.l2_norm() * q0.lp_norm(seq.s_f64(j))?,
        alpha_hat,
    })
}

/// `I_1(t, q_0, q_1, q_2)` and the reduced form `I_0(t_1, q_2 q~_2)` at level `j`.
pub fn reduction_pair(t: &ScalarField, q: [&ScalarField; 3], j: usize) -> Result<(f64, f64)> {
    let lhs = brute_force_ik(t, &[q[0].clone(), q[1].clone(), q[2].clone()], 1)?;
    let step = inductive_step(t, q[0], q[1], j)?;
    let rhs = brute_force_ik(&step.t1, &[q[2] * &step.q2_tilde], 0)?;
    Ok((lhs, rhs))
}

/// Nonnegative smooth random field, `|random_smooth_field|` normalized to unit `L^2`.
pub fn nonnegative_sample(grid: GridSpec, rng: &mut ChaCha8Rng) -> ScalarField {
    let f = random_smooth_field(grid, rng).abs();
    let n = f.l2_norm();
    if n == 0.0 {
        f
    } else {
        f.scale(Complex64::new(1.0 / n, 0.0))
    }
}

/// Summary of the seeded reduction ensemble at `k = 1`.
#[derive(Debug, Clone, Serialize)]
pub struct ReductionEnsemble {
    pub samples: usize,
    /// largest `I_1 / I_0(t_1, q_2 q~_2)`, must not exceed 1
    pub worst_ratio: f64,
    /// largest `I_1 / (||t||_2 prod ||q_j||_2)`, the empirical multilinear constant
    pub empirical_k: f64,
}

pub fn reduction_ensemble(grid: GridSpec, samples: usize, seed: u64) -> Result<ReductionEnsemble> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_ratio = 0.0f64;
    let mut empirical_k = 0.0f64;
    for _ in 0..samples {
        let t = nonnegative_sample(grid, &mut rng);
        let q: Vec<ScalarField> = (0..3).map(|_| nonnegative_sample(grid, &mut rng)).collect();
        let (lhs, rhs) = reduction_pair(&t, [&q[0], &q[1], &q[2]], 0)?;
        worst_ratio = worst_ratio.max(if rhs > 0.0 { lhs / rhs } else { 0.0 });
        let norms = t.l2_norm() * q.iter().map(|f| f.l2_norm()).product::<f64>();
        empirical_k = empirical_k.max(lhs / norms);
    }
    Ok(ReductionEnsemble { samples, worst_ratio, empirical_k })
}

/// HLS ratios at `p = 4/3` for a seeded ensemble of `|random smooth|` fields.
pub fn hls_ensemble(grid: GridSpec, samples: usize, seed: u64) -> Result<Vec<f64>> {
    let ops = SingularTransforms::new(grid);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples).map(|_| hls_ratio_with(&ops, &nonnegative_sample(grid, &mut rng), 4.0 / 3.0)).collect()
}

/// `(1 + |x|^2)^{-3/2}`, the extremal profile for `R: L^{4/3} -> L^4`.
pub fn hls_extremizer(grid: GridSpec, scale: f64) -> ScalarField {
    ScalarField::from_fn(grid, |x| Complex64::new((1.0 + (x / scale).norm_sqr()).powf(-1.5), 0.0))
}

#[cfg(test)]
mod tests;
