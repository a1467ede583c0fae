//! Plancherel defect `| |S|^2 - |Q|^2 | / |Q|^2` under grid refinement at fixed box size.
//!
//! cargo run --example plancherel -- [amplitude] [n_max]

use dbar::forward::ForwardScattering;
use dbar::neumann::SolveOptions;
use dbar::{make_potential, GridSpec, PotentialKind, Symmetry};

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let amp: f64 = args.first().map_or(1.0, |s| s.parse().expect("amplitude"));
    let n_max: usize = args.get(1).map_or(64, |s| s.parse().expect("n_max"));

    let mut n = 16;
    while n <= n_max {
        let grid = GridSpec::new(6.0, n)?;
        let zgrid = grid.dual_window(n * 3 / 8 / 2 * 2)?;
        let q = make_potential(PotentialKind::Gaussian, amp, Symmetry::Hermitian, 0, grid)?;
        let s = ForwardScattering::new(q.clone()).scattering_data(&zgrid, &SolveOptions::default())?.s;
        let (qn, sn) = (q.matrix_l2_norm(), s.matrix_l2_norm());
        println!("n = {n:<4} z-window {zgrid}: defect {:.4e}", (sn * sn - qn * qn).abs() / (qn * qn));
        n *= 2;
    }
    Ok(())
}
