use super::*;
use crate::potential::{make_potential, make_scalar, PotentialKind};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rel(a: &ScalarField, b: &ScalarField) -> f64 {
    (a - b).l2_norm() / b.l2_norm()
}

#[test]
fn evolution_is_an_isometric_group() {
    let zg = GridSpec::new(5.0, 24).unwrap();
    let s = make_potential(PotentialKind::RandomSmooth, 0.9, Symmetry::None, 4, zg).unwrap();
    assert_eq!(evolve_scattering(&s, 0.0).q12().values(), s.q12().values());
    let st = evolve_scattering(&s, 0.7);
    for (a, b) in st.q12().values().iter().zip(s.q12().values()) {
        assert!((a.norm() - b.norm()).abs() < 1e-14);
    }
    assert!((st.matrix_l2_norm() - s.matrix_l2_norm()).abs() < 1e-12 * s.matrix_l2_norm());
    let two_step = evolve_scattering(&evolve_scattering(&s, 0.3), 0.4);
    assert!(two_step.difference(&st).matrix_l2_norm() < 1e-12 * s.matrix_l2_norm());
}

#[test]
fn evolution_keeps_the_hermitian_data_relation() {
    // S21(z) = conj S12(conj z) survives the multiplier
    let zg = GridSpec::new(5.0, 24).unwrap();
    let s12 = make_scalar(PotentialKind::RandomSmooth, 1.0, 6, zg).unwrap();
    let s = OffDiagPotential::new(s12.clone(), s12.conjugated_argument().conj()).unwrap();
    let st = evolve_scattering(&s, 1.3);
    assert!(crate::forward::conjugation_defect(&st) < 1e-14);
}

#[test]
fn linear_flow_is_unitary_and_additive() {
    let g = GridSpec::new(4.0, 32).unwrap();
    let q = make_scalar(PotentialKind::RandomSmooth, 1.0, 2, g).unwrap();
    let a = linear_flow(&linear_flow(&q, 0.2), 0.3);
    assert!(rel(&a, &linear_flow(&q, 0.5)) < 1e-12);
    assert!((linear_flow(&q, 0.5).l2_norm() / q.l2_norm() - 1.0).abs() < 1e-12);
    assert!(rel(&linear_flow(&q, 0.0), &q) < 1e-14);
}

#[test]
fn linear_flow_satisfies_its_equation() {
    let g = GridSpec::new(4.0, 32).unwrap();
    let q = make_scalar(PotentialKind::Gaussian, 1.0, 0, g).unwrap();
    let dt = 1e-4;
    let snaps: Vec<_> = [-dt, 0.0, dt].iter().map(|&t| linear_flow(&q, t)).collect();
    let qt = (&snaps[2] - &snaps[0]).scale(c(0.5 / dt, 0.0));
    let qxy = Spectral::new(g).mixed_derivative(&snaps[1]);
    assert!(rel(&qt, &qxy.scale(c(0.0, 1.0))) < 1e-6);
}

#[test]
fn mixed_derivative_of_a_gaussian() {
    let g = GridSpec::new(6.0, 64).unwrap();
    let f = ScalarField::from_fn(g, |x| c((-x.norm_sqr()).exp(), 0.0));
    let exact = ScalarField::from_fn(g, |x| c(4.0 * x.re * x.im * (-x.norm_sqr()).exp(), 0.0));
    assert!(rel(&Spectral::new(g).mixed_derivative(&f), &exact) < 1e-10);
}

#[test]
fn mean_field_solves_its_poisson_problem() {
    let g = GridSpec::new(6.0, 64).unwrap();
    let q = make_scalar(PotentialKind::Gaussian, 0.8, 0, g).unwrap();
    let r = mean_field(&q);
    let sp = Spectral::new(g);
    let lap = sp.multiply(&r, |a, b| c(-(a * a + b * b), 0.0));
    let rho = q.map(|v| c(v.norm_sqr(), 0.0));
    assert!(rel(&lap, &sp.mixed_derivative(&rho)) < 1e-10);
    assert!(r.values().iter().map(|v| v.re).sum::<f64>().abs() < 1e-12);
    assert!(mean_field(&ScalarField::zeros(g)).is_zero());
}

#[test]
fn residual_contract() {
    let g = GridSpec::new(4.0, 16).unwrap();
    let z = ScalarField::zeros(g);
    assert_eq!(dsii_residual(&[z.clone(), z.clone(), z.clone()], 0.1).unwrap(), 0.0);
    assert!(dsii_residual(&[z.clone(), z.clone()], 0.1).is_err());
    assert!(dsii_residual(&[z.clone(), z.clone(), z.clone()], 0.0).is_err());
    // linear snapshots leave only the cubic term, of relative size ~ |q|^2
    let q = make_scalar(PotentialKind::Gaussian, 1e-2, 0, GridSpec::new(4.0, 32).unwrap()).unwrap();
    let snaps: Vec<_> = [-1e-3, 0.0, 1e-3].iter().map(|&t| linear_flow(&q, t)).collect();
    assert!(dsii_residual(&snaps, 1e-3).unwrap() < 1e-3);
}

#[test]
fn zero_data_stays_zero() {
    let g = GridSpec::new(4.0, 16).unwrap();
    let zg = g.dual_window(8).unwrap();
    let q = dsii_solve(&ScalarField::zeros(g), 0.5, &zg, &SolveOptions::default()).unwrap();
    assert!(q.is_zero());
    let a = make_scalar(PotentialKind::Gaussian, 0.1, 0, g).unwrap();
    assert_eq!(continuity_experiment(&a, &a, 1.0, &zg, &SolveOptions::default()).unwrap(), 0.0);
}

#[test]
fn evolution_sign_matches_the_linear_flow() {
    let g = GridSpec::new(4.0, 32).unwrap();
    let zg = g.dual_window(16).unwrap();
    // no reflection symmetry, so the two signs give clearly different fields
    let q0 = make_scalar(PotentialKind::RandomSmooth, 1e-3, 0, g).unwrap();
    let solver = DsiiSolver::new(&q0, &zg, SolveOptions::default()).unwrap();
    let t = 0.1;
    let oracle = linear_flow(&q0, t);
    let right = rel(&solver.solve(t).unwrap(), &oracle);
    let wrong = rel(&solver.solve(-t).unwrap(), &oracle);
    assert!(right < 0.05 && wrong > 0.2, "right {right}, wrong {wrong}");
}
