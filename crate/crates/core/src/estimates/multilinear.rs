//! Brute-force evaluation of the multilinear forms
//! `I_k(t, q_0..q_2k) = int t(x_0 - x_1 + ... + x_2k) prod q_j(x_j) / prod |x_j - x_(j+1)|`.

use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::field::ScalarField;
use crate::grid::GridSpec;
use crate::transforms::riesz_cell_integral;

/// `|x|^{-1}` on lattice differences, with the cell average `W / h^2` at 0.
/// This is the kernel the Riesz potential applies, so sums here match it term by term.
struct DiffKernel {
    n: usize,
    values: Vec<f64>,
}

impl DiffKernel {
    fn new(grid: &GridSpec) -> Self {
        let n = grid.n();
        let h = grid.spacing();
        let m = 2 * n - 1;
        let mut values = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                let (dj, dk) = (a as f64 - (n - 1) as f64, b as f64 - (n - 1) as f64);
                let r = (dj * dj + dk * dk).sqrt() * h;
                values[a * m + b] = if r == 0.0 { riesz_cell_integral(h) / (h * h) } else { 1.0 / r };
            }
        }
        Self { n, values }
    }

    fn at(&self, a: (usize, usize), b: (usize, usize)) -> f64 {
        let m = 2 * self.n - 1;
        let dj = a.0 + self.n - 1 - b.0;
        let dk = a.1 + self.n - 1 - b.1;
        self.values[dj * m + dk]
    }
}

fn max_grid(k: usize) -> usize {
    match k {
        0 => usize::MAX,
        1 => 16,
        _ => 8,
    }
}

/// The `(2k+1)`-fold midpoint sum. The alternating sum of an odd number of
/// cell centers is again a cell center, so `t` is read by exact index
/// arithmetic and taken as 0 outside the grid.
pub fn brute_force_ik(t: &ScalarField, qs: &[ScalarField], k: usize) -> Result<f64> {
    if k > 2 {
        return Err(invalid(format!("k = {k} exceeds the supported maximum 2")));
    }
    if qs.len() != 2 * k + 1 {
        return Err(invalid(format!("I_{k} takes {} factors, got {}", 2 * k + 1, qs.len())));
    }
    let grid = *t.grid();
    if grid.n() > max_grid(k) {
        return Err(invalid(format!("n = {} exceeds the cost guard {} for k = {k}", grid.n(), max_grid(k))));
    }
    for q in qs {
        if !q.grid().same_as(&grid) {
            return Err(crate::Error::GridMismatch(format!("{} vs {}", q.grid(), grid)));
        }
    }
    if !t.is_nonnegative_real() || qs.iter().any(|q| !q.is_nonnegative_real()) {
        return Err(invalid("inputs must be nonnegative"));
    }
    let n = grid.n();
    let w = grid.cell_area();
    let tv: Vec<f64> = t.values().iter().map(|v| v.re).collect();
    let qv: Vec<Vec<f64>> = qs.iter().map(|q| q.values().iter().map(|v| v.re).collect()).collect();
    let kern = DiffKernel::new(&grid);

    struct Walk<'a> {
        n: usize,
        last: usize,
        tv: &'a [f64],
        qv: &'a [Vec<f64>],
        kern: &'a DiffKernel,
    }
    impl Walk<'_> {
        // level = index of the point being chosen; acc = alternating index sum so far
        fn rec(&self, level: usize, prev: (usize, usize), acc: (i64, i64), weight: f64) -> f64 {
            let n = self.n;
            let mut total = 0.0;
            let sign = if level % 2 == 0 { 1 } else { -1 };
            for j in 0..n {
                for k in 0..n {
                    let q = self.qv[level][j * n + k];
                    if q == 0.0 {
                        continue;
                    }
                    let wt = weight * q * self.kern.at(prev, (j, k));
                    let acc = (acc.0 + sign * j as i64, acc.1 + sign * k as i64);
                    total += if level == self.last { self.t_at(acc) * wt } else { self.rec(level + 1, (j, k), acc, wt) };
                }
            }
            total
        }

        fn t_at(&self, idx: (i64, i64)) -> f64 {
            let n = self.n as i64;
            if (0..n).contains(&idx.0) && (0..n).contains(&idx.1) {
                self.tv[(idx.0 * n + idx.1) as usize]
            } else {
                0.0
            }
        }
    }
    let walk = Walk { n, last: 2 * k, tv: &tv, qv: &qv, kern: &kern };

    // outermost index in parallel, partial sums reduced in index order
    let partial: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|i0| {
            let (j, kk) = (i0 / n, i0 % n);
            let q = qv[0][i0];
            if q == 0.0 {
                return 0.0;
            }
            if k == 0 {
                walk.t_at((j as i64, kk as i64)) * q
            } else {
                walk.rec(1, (j, kk), (j as i64, kk as i64), q)
            }
        })
        .collect();
    Ok(partial.iter().sum::<f64>() * w.powi(2 * k as i32 + 1))
}
