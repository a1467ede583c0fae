//! L^2 continuity of the DS-II flow: `|q_a(t) - q_b(t)| / |q_a(0) - q_b(0)|`.
//!
//! cargo run --example continuity -- [n] [pairs]

use dbar::dsii::continuity_experiment;
use dbar::neumann::SolveOptions;
use dbar::potential::make_scalar;
use dbar::{GridSpec, PotentialKind};

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(32, |s| s.parse().expect("n"));
    let pairs: u64 = args.get(1).map_or(3, |s| s.parse().expect("pairs"));

    let grid = GridSpec::new(6.0, n)?;
    let zgrid = grid.dual_window(n * 3 / 8 / 2 * 2)?;
    let opts = SolveOptions::default();
    for seed in 0..pairs {
        let a = make_scalar(PotentialKind::RandomSmooth, 0.5, 2 * seed, grid)?;
        let b = make_scalar(PotentialKind::RandomSmooth, 0.4, 2 * seed + 1, grid)?;
        for t in [0.1, 1.0] {
            println!("pair {seed}, t = {t}: ratio {:.4}", continuity_experiment(&a, &b, t, &zgrid, &opts)?);
        }
    }
    Ok(())
}
