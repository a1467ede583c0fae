//! Experiment drivers behind the CLI subcommands. Each writes field dumps and a
//! `key,value` CSV into a directory and returns the CSV rows.

use std::path::Path;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::Config;
use crate::dsii::{linear_flow, DsiiSolver};
use crate::error::Result;
use crate::estimates::{
    exponent_sequence, hls_ensemble, hls_extremizer, hls_ratio, reduction_ensemble, nonnegative_sample, step_bounds,
    SHARP_HLS_CONSTANT,
};
use crate::field::{OffDiagPotential, Symmetry};
use crate::forward::{conjugation_defect, ForwardScattering};
use crate::grid::GridSpec;
use crate::inverse::InverseScattering;
use crate::io::{load_field, save_field, KeyValueCsv};
use crate::neumann::SolveReport;
use crate::potential::{make_potential, random_smooth_field};

pub const S12_FILE: &str = "s12.field";
pub const S21_FILE: &str = "s21.field";
pub const Q12_FILE: &str = "q12.field";
pub const Q21_FILE: &str = "q21.field";

fn save_pair(dir: &Path, names: (&str, &str), f: &OffDiagPotential) -> Result<()> {
    save_field(dir.join(names.0), f.q12())?;
    save_field(dir.join(names.1), f.q21())
}

fn push_reports(csv: &mut KeyValueCsv, prefix: &str, reports: &[SolveReport]) {
    let max_it = reports.iter().map(|r| r.iterations).max().unwrap_or(0);
    let worst = reports.iter().map(|r| r.final_residual).fold(0.0, f64::max);
    csv.push(format!("{prefix}.max_iterations"), max_it);
    csv.push(format!("{prefix}.worst_residual"), format!("{worst:.6e}"));
    for (i, r) in reports.iter().enumerate() {
        csv.push(format!("{prefix}.{i}.iterations"), r.iterations);
        csv.push(format!("{prefix}.{i}.residual"), format!("{:.6e}", r.final_residual));
    }
}

pub fn config_potential(cfg: &Config, grid: GridSpec) -> Result<OffDiagPotential> {
    let p = &cfg.potential;
    make_potential(p.kind, p.amplitude, p.symmetry, p.seed, grid)
}

/// `Q -> S` on the configured grids.
pub fn run_forward(cfg: &Config, workers: Option<usize>, dir: &Path) -> Result<(OffDiagPotential, KeyValueCsv)> {
    let (xg, zg) = (cfg.xgrid()?, cfg.zgrid()?);
    let q = config_potential(cfg, xg)?;
    let data = ForwardScattering::new(q.clone()).scattering_data(&zg, &cfg.solve_options(workers))?;
    save_pair(dir, (S12_FILE, S21_FILE), &data.s)?;
    let mut csv = KeyValueCsv::new();
    csv.push_grid("x", &xg).push_grid("z", &zg);
    let (qn, sn) = (q.matrix_l2_norm(), data.s.matrix_l2_norm());
    csv.push("q.l2", format!("{qn:.12e}")).push("s.l2", format!("{sn:.12e}"));
    if qn > 0.0 {
        csv.push("plancherel_defect", format!("{:.6e}", (sn * sn - qn * qn).abs() / (qn * qn)));
    }
    csv.push("conjugation_defect", format!("{:.6e}", conjugation_defect(&data.s)));
    push_reports(&mut csv, "z", &data.reports);
    csv.save(dir.join("forward.csv"))?;
    Ok((data.s, csv))
}

/// `S -> Q`. The data come from a previous forward run directory, or else the
/// configured potential generator is sampled on the z-grid and used as `S`.
pub fn run_inverse(cfg: &Config, workers: Option<usize>, from: Option<&Path>, dir: &Path) -> Result<(OffDiagPotential, KeyValueCsv)> {
    let xg = cfg.xgrid()?;
    let s = match from {
        Some(src) => OffDiagPotential::new(load_field(src.join(S12_FILE))?, load_field(src.join(S21_FILE))?)?,
        None => config_potential(cfg, cfg.zgrid()?)?,
    };
    let data = InverseScattering::new(s.clone()).reconstruct(&xg, &cfg.solve_options(workers))?;
    save_pair(dir, (Q12_FILE, Q21_FILE), &data.s)?;
    let mut csv = KeyValueCsv::new();
    csv.push_grid("x", &xg).push_grid("z", s.grid());
    csv.push("s.l2", format!("{:.12e}", s.matrix_l2_norm()));
    csv.push("q.l2", format!("{:.12e}", data.s.matrix_l2_norm()));
    push_reports(&mut csv, "x", &data.reports);
    csv.save(dir.join("inverse.csv"))?;
    Ok((data.s, csv))
}

/// Forward then inverse, reporting the relative `L^2` roundtrip defect.
pub fn run_roundtrip(cfg: &Config, workers: Option<usize>, dir: &Path) -> Result<KeyValueCsv> {
    let (s, _) = run_forward(cfg, workers, dir)?;
    let q = config_potential(cfg, cfg.xgrid()?)?;
    let back = InverseScattering::new(s).reconstruct(&q.grid().clone(), &cfg.solve_options(workers))?.s;
    save_pair(dir, (Q12_FILE, Q21_FILE), &back)?;
    let mut csv = KeyValueCsv::new();
    csv.push_grid("x", &cfg.xgrid()?).push_grid("z", &cfg.zgrid()?);
    let qn = q.matrix_l2_norm();
    let err = back.difference(&q).matrix_l2_norm();
    csv.push("q.l2", format!("{qn:.12e}"));
    csv.push("roundtrip.abs", format!("{err:.6e}"));
    csv.push("roundtrip.rel", format!("{:.6e}", if qn > 0.0 { err / qn } else { 0.0 }));
    csv.save(dir.join("roundtrip.csv"))?;
    Ok(csv)
}

/// DS-II from `q0 = Q^{12}` of the configured potential, plus a perturbed
/// second datum for the continuity ratios.
pub fn run_evolve(cfg: &Config, workers: Option<usize>, dir: &Path) -> Result<KeyValueCsv> {
    let (xg, zg) = (cfg.xgrid()?, cfg.zgrid()?);
    let p = &cfg.potential;
    let q0 = make_potential(p.kind, p.amplitude, Symmetry::Hermitian, p.seed, xg)?.q12().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed.wrapping_add(1));
    let bump = random_smooth_field(xg, &mut rng);
    let bn = bump.l2_norm();
    let q0b = &q0 + &bump.scale(Complex64::new(cfg.evolve.perturbation / bn, 0.0));
    let opts = cfg.solve_options(workers);
    let (sa, sb) = (DsiiSolver::new(&q0, &zg, opts)?, DsiiSolver::new(&q0b, &zg, opts)?);
    let d0 = (&q0 - &q0b).l2_norm();
    let mut csv = KeyValueCsv::new();
    csv.push_grid("x", &xg).push_grid("z", &zg);
    csv.push("q0.l2", format!("{:.12e}", q0.l2_norm())).push("perturbation.l2", format!("{d0:.12e}"));
    for (i, &t) in cfg.evolve.times.iter().enumerate() {
        let (qa, qb) = (sa.solve(t)?, sb.solve(t)?);
        save_field(dir.join(format!("q_t{i}.field")), &qa)?;
        let lin = linear_flow(&q0, t);
        csv.push(format!("t{i}.time"), t);
        csv.push(format!("t{i}.q.l2"), format!("{:.12e}", qa.l2_norm()));
        let ratio = if d0 > 0.0 { (&qa - &qb).l2_norm() / d0 } else { 0.0 };
        csv.push(format!("t{i}.continuity_ratio"), format!("{ratio:.6e}"));
        csv.push(format!("t{i}.distance_to_linear_flow"), format!("{:.6e}", (&qa - &lin).l2_norm() / lin.l2_norm().max(f64::MIN_POSITIVE)));
    }
    csv.save(dir.join("continuity.csv"))?;
    Ok(csv)
}

/// Exponent identities, HLS ratios, and the discrete reduction ensemble.
pub fn run_estimates(cfg: &Config, dir: &Path) -> Result<KeyValueCsv> {
    let e = &cfg.estimates;
    let mut csv = KeyValueCsv::new();
    let seq = exponent_sequence(e.jmax)?;
    for c in seq.check_identities() {
        csv.push(format!("exponents.{}", c.name), if c.holds { "pass" } else { "fail" });
    }
    csv.push("exponents.s_1", &seq.s[1]);
    csv.push(format!("exponents.s_{}", e.jmax), format!("{:.12e}", seq.s_f64(e.jmax)));

    let pi = std::f64::consts::PI;
    let grid = cfg.xgrid()?;
    csv.push_grid("hls", &grid);
    let ratios = hls_ensemble(grid, e.ensemble_size, e.seed)?;
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    csv.push("hls.ensemble_max", format!("{max:.6e}"));
    csv.push("hls.ensemble_max_over_pi", format!("{:.6e}", max / pi));
    csv.push("hls.sharp_constant", format!("{SHARP_HLS_CONSTANT:.12e}"));
    csv.push("hls.ensemble_within_1.02pi", if max <= 1.02 * pi { "pass" } else { "fail" });
    csv.push("hls.ensemble_within_sharp", if max <= SHARP_HLS_CONSTANT * 1.02 { "pass" } else { "fail" });
    let ext_grid = GridSpec::new(50.0, 256)?;
    let ext = hls_ratio(&hls_extremizer(ext_grid, 1.0), 4.0 / 3.0)?;
    csv.push_grid("extremizer", &ext_grid);
    csv.push("extremizer.ratio", format!("{ext:.6e}"));
    csv.push("extremizer.at_least_0.95pi", if ext >= 0.95 * pi { "pass" } else { "fail" });

    let small = GridSpec::new(3.0, 6)?;
    let l4 = reduction_ensemble(small, 20, e.seed)?;
    csv.push_grid("reduction", &small);
    csv.push("reduction.worst_ratio", format!("{:.12e}", l4.worst_ratio));
    csv.push("reduction.holds", if l4.worst_ratio <= 1.0 + 1e-9 { "pass" } else { "fail" });
    csv.push("multilinear.empirical_k", format!("{:.6e}", l4.empirical_k));

    let mut rng = ChaCha8Rng::seed_from_u64(e.seed);
    for j in 0..e.jmax.min(3) {
        let (t, q0, q1) = (nonnegative_sample(grid, &mut rng), nonnegative_sample(grid, &mut rng), nonnegative_sample(grid, &mut rng));
        for (label, alpha) in [("pi", pi), ("sharp", SHARP_HLS_CONSTANT)] {
            let b = step_bounds(&t, &q0, &q1, j, alpha)?;
            csv.push(format!("step{j}.{label}.t1_ratio"), format!("{:.6e}", b.t1_norm / b.t1_bound));
            csv.push(format!("step{j}.{label}.q2_ratio"), format!("{:.6e}", b.q2_norm / b.q2_bound));
            csv.push(format!("step{j}.{label}.holds"), if b.holds(0.05) { "pass" } else { "fail" });
        }
    }
    csv.save(dir.join("estimates.csv"))?;
    Ok(csv)
}

/// Reads the two field dumps of an off-diagonal field.
pub fn load_pair(dir: &Path, names: (&str, &str)) -> Result<OffDiagPotential> {
    OffDiagPotential::new(load_field(dir.join(names.0))?, load_field(dir.join(names.1))?)
}

