//! L^4 norms of the even Neumann terms `(G_z Q)^{2k} 1` and their successive ratios.
//!
//! cargo run --example neumann_decay -- [amplitude] [kmax]

use dbar::forward::neumann_term_norms;
use dbar::{make_potential, GridSpec, PotentialKind, Symmetry};
use num_complex::Complex64;

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let amp: f64 = args.first().map_or(0.5, |s| s.parse().expect("amplitude"));
    let kmax: usize = args.get(1).map_or(5, |s| s.parse().expect("kmax"));

    let grid = GridSpec::new(6.0, 64)?;
    let q = make_potential(PotentialKind::Gaussian, amp, Symmetry::Hermitian, 0, grid)?;
    for z in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.5), Complex64::new(-2.0, 1.5)] {
        let norms = neumann_term_norms(&q, z, kmax)?;
        let ratios: Vec<String> = norms.windows(2).map(|w| format!("{:.3}", w[1] / w[0])).collect();
        let shown: Vec<String> = norms.iter().map(|x| format!("{x:.3e}")).collect();
        println!("z = {z}: norms {}", shown.join(" "));
        println!("    ratios {}", ratios.join(" "));
    }
    // doubling Q multiplies the k-th term by about 4^k
    let z = Complex64::new(1.0, 0.5);
    let a = neumann_term_norms(&q, z, 3)?;
    let b = neumann_term_norms(&q.scale(2.0), z, 3)?;
    for (k, (x, y)) in a.iter().zip(&b).enumerate() {
        println!("k = {}: |term(2Q)| / |term(Q)| = {:.3}", k + 1, y / x);
    }
    Ok(())
}
