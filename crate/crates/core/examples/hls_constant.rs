//! HLS ratios `||R|f| ||_4 / ||f||_{4/3}` against the sharp constant `2 sqrt(pi)`.
//!
//! cargo run --example hls_constant -- [L] [n] [samples]

use dbar::estimates::{hls_ensemble, hls_extremizer, hls_ratio, SHARP_HLS_CONSTANT};
use dbar::{GridSpec, ScalarField};
use num_complex::Complex64;

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let l: f64 = args.first().map_or(50.0, |s| s.parse().expect("L"));
    let n: usize = args.get(1).map_or(256, |s| s.parse().expect("n"));
    let samples: usize = args.get(2).map_or(10, |s| s.parse().expect("samples"));
    let grid = GridSpec::new(l, n)?;
    let pi = std::f64::consts::PI;
    println!("grid {grid}; sharp constant {SHARP_HLS_CONSTANT:.6}, pi = {pi:.6}");
    let ext = hls_ratio(&hls_extremizer(grid, 1.0), 4.0 / 3.0)?;
    println!("extremizer (1+|x|^2)^(-3/2): {ext:.6} = {:.4} pi", ext / pi);
    for lambda in [0.5, 1.0, 2.0] {
        let g = ScalarField::from_fn(grid, |x| Complex64::new((-(x * lambda).norm_sqr()).exp(), 0.0));
        println!("gaussian exp(-|{lambda} x|^2): {:.6}", hls_ratio(&g, 4.0 / 3.0)?);
    }
    let small = GridSpec::new(6.0, 128)?;
    let ens = hls_ensemble(small, samples, 0)?;
    let max = ens.iter().cloned().fold(0.0, f64::max);
    println!("random |f| ensemble on {small}: max {max:.6} = {:.4} pi", max / pi);
    Ok(())
}
