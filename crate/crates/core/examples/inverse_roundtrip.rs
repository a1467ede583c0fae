//! Forward then inverse scattering of a hermitian potential, under both row routings.
//!
//! cargo run --example inverse_roundtrip -- [n] [amplitude] [z-window] [gaussian|bump|random-smooth]

use std::time::Instant;

use dbar::forward::ForwardScattering;
use dbar::inverse::{CauchyRouting, InverseScattering};
use dbar::neumann::SolveOptions;
use dbar::{make_potential, GridSpec, PotentialKind, Symmetry};

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(64, |s| s.parse().expect("n"));
    let amp: f64 = args.get(1).map_or(0.5, |s| s.parse().expect("amplitude"));
    let nz: usize = args.get(2).map_or(n * 3 / 8 / 2 * 2, |s| s.parse().expect("z-window"));

    let kind = match args.get(3).map(String::as_str) {
        Some("bump") => PotentialKind::Bump,
        Some("random-smooth") => PotentialKind::RandomSmooth,
        _ => PotentialKind::Gaussian,
    };
    let grid = GridSpec::new(6.0, n)?;
    let zgrid = grid.dual_window(nz)?;
    let q = make_potential(kind, amp, Symmetry::Hermitian, 0, grid)?;
    let opts = SolveOptions::default();
    let t = Instant::now();
    let s = ForwardScattering::new(q.clone()).scattering_data(&zgrid, &opts)?.s;
    println!("forward on {zgrid}: {:.1?}", t.elapsed());
    let mut recon = Vec::new();
    for routing in [CauchyRouting::Uniform, CauchyRouting::RowConjugate] {
        let t = Instant::now();
        let back = InverseScattering::with_routing(s.clone(), routing).reconstruct(&grid, &opts)?.s;
        let err = back.difference(&q).matrix_l2_norm() / q.matrix_l2_norm();
        println!("{routing:?}: relative roundtrip error {err:.4e} ({:.1?})", t.elapsed());
        recon.push(back);
    }
    let gap = recon[0].difference(&recon[1]).matrix_l2_norm() / q.matrix_l2_norm();
    println!("routings differ by {gap:.3e}");
    Ok(())
}
