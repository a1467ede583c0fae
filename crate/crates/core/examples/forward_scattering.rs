//! Scattering data of a hermitian Gaussian and the Plancherel defect.
//!
//! cargo run --example forward_scattering -- [n] [amplitude] [z-window]

use std::time::Instant;

use dbar::forward::{conjugation_defect, ForwardScattering};
use dbar::neumann::SolveOptions;
use dbar::{make_potential, GridSpec, PotentialKind, Symmetry};

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(64, |s| s.parse().expect("n"));
    let amp: f64 = args.get(1).map_or(1.0, |s| s.parse().expect("amplitude"));
    let nz: usize = args.get(2).map_or(n * 3 / 8 / 2 * 2, |s| s.parse().expect("z-window"));

    let grid = GridSpec::new(6.0, n)?;
    let zgrid = grid.dual_window(nz)?;
    let q = make_potential(PotentialKind::Gaussian, amp, Symmetry::Hermitian, 0, grid)?;
    let t = Instant::now();
    let data = ForwardScattering::new(q.clone()).scattering_data(&zgrid, &SolveOptions::default())?;
    let (qn, sn) = (q.matrix_l2_norm(), data.s.matrix_l2_norm());
    let iters = data.reports.iter().map(|r| r.iterations).max().unwrap_or(0);
    println!("x-grid {grid}, z-grid {zgrid}");
    println!("|Q|_2 = {qn:.6}  |S|_2 = {sn:.6}");
    println!("plancherel defect = {:.4e}", (sn * sn - qn * qn).abs() / (qn * qn));
    println!("conjugation defect = {:.4e}", conjugation_defect(&data.s));
    println!("max iterations = {iters}, elapsed {:.1?}", t.elapsed());
    Ok(())
}
