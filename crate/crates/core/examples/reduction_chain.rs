//! Brute-force multilinear sums `I_k` and the Holder reduction step on tiny grids.
//!
//! cargo run --example reduction_chain -- [samples] [seed]

use dbar::estimates::{brute_force_ik, nonnegative_sample, reduction_ensemble, reduction_pair};
use dbar::GridSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let samples: usize = args.first().map_or(20, |s| s.parse().expect("samples"));
    let seed: u64 = args.get(1).map_or(0, |s| s.parse().expect("seed"));

    let grid = GridSpec::new(3.0, 6)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = nonnegative_sample(grid, &mut rng);
    let q: Vec<_> = (0..3).map(|_| nonnegative_sample(grid, &mut rng)).collect();
    println!("I_0(t, q0) = {:.6e}", brute_force_ik(&t, &q[..1], 0)?);
    let (lhs, rhs) = reduction_pair(&t, [&q[0], &q[1], &q[2]], 0)?;
    println!("I_1 = {lhs:.6e} <= reduced I_0 = {rhs:.6e}  (ratio {:.6})", lhs / rhs);
    let e = reduction_ensemble(grid, samples, seed)?;
    println!("{} samples: worst ratio {:.9}, empirical K {:.4}", e.samples, e.worst_ratio, e.empirical_k);
    Ok(())
}
