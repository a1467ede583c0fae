//! DS-II by scattering: norm conservation, comparison with the linear flow,
//! and the equation residual with its self-convergence order in dt.
//!
//! cargo run --example dsii_evolution -- [n] [amplitude] [dt]

use dbar::dsii::{dsii_residual, linear_flow, residual_convergence_order, DsiiSolver};
use dbar::neumann::SolveOptions;
use dbar::potential::make_scalar;
use dbar::{GridSpec, PotentialKind};

fn main() -> dbar::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let n: usize = args.first().map_or(64, |s| s.parse().expect("n"));
    let amp: f64 = args.get(1).map_or(1e-2, |s| s.parse().expect("amplitude"));
    let dt: f64 = args.get(2).map_or(1e-3, |s| s.parse().expect("dt"));

    let grid = GridSpec::new(6.0, n)?;
    let zgrid = grid.dual_window(n * 3 / 8 / 2 * 2)?;
    let q0 = make_scalar(PotentialKind::Gaussian, amp, 0, grid)?;
    let solver = DsiiSolver::new(&q0, &zgrid, SolveOptions::with_tol(1e-12))?;
    println!("x-grid {grid}, z-grid {zgrid}, |q0|_2 = {:.3e}", q0.l2_norm());
    for t in [0.0, 0.1, 0.5, 1.0] {
        let q = solver.solve(t)?;
        let lin = linear_flow(&q0, t);
        println!(
            "t = {t:<4} |q|_2 = {:.6e}  |q - linear flow| / |linear flow| = {:.3e}",
            q.l2_norm(),
            (&q - &lin).l2_norm() / lin.l2_norm()
        );
    }
    let t = 0.1;
    let snaps = [solver.solve(t - dt)?, solver.solve(t)?, solver.solve(t + dt)?];
    println!("residual at t = {t}, dt = {dt}: {:.3e}", dsii_residual(&snaps, dt)?);
    let (order, rel) = residual_convergence_order(&solver, t, dt)?;
    println!("residuals at dt, dt/2, dt/4: {:.3e} {:.3e} {:.3e}; self-convergence order {order:.3}", rel[0], rel[1], rel[2]);
    Ok(())
}
