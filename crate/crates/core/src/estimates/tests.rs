use std::f64::consts::PI;

use super::*;
use crate::transforms::riesz_cell_integral;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn samples(grid: GridSpec, count: usize, seed: u64) -> Vec<ScalarField> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| nonnegative_sample(grid, &mut rng)).collect()
}

/// Direct loops over coordinates; `t` is located by coordinate search.
fn naive_ik(t: &ScalarField, qs: &[ScalarField]) -> f64 {
    let g = *t.grid();
    let h = g.spacing();
    let w = g.cell_area();
    let self_kernel = riesz_cell_integral(h) / (h * h);
    let kern = |a: Complex64, b: Complex64| if a == b { self_kernel } else { 1.0 / (a - b).norm() };
    let t_at = |x: Complex64| {
        g.points().zip(t.values()).find(|(y, _)| (y - x).norm() < 1e-9 * h).map_or(0.0, |(_, v)| v.re)
    };
    fn walk(
        g: &GridSpec,
        qs: &[ScalarField],
        level: usize,
        prev: Complex64,
        alt: Complex64,
        acc: f64,
        kern: &dyn Fn(Complex64, Complex64) -> f64,
        t_at: &dyn Fn(Complex64) -> f64,
    ) -> f64 {
        let mut s = 0.0;
        for (x, q) in g.points().zip(qs[level].values()) {
            let alt = if level % 2 == 0 { alt + x } else { alt - x };
            let acc = acc * q.re * if level == 0 { 1.0 } else { kern(prev, x) };
            s += if level + 1 == qs.len() { acc * t_at(alt) } else { walk(g, qs, level + 1, x, alt, acc, kern, t_at) };
        }
        s
    }
    walk(&g, qs, 0, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 1.0, &kern, &t_at) * w.powi(qs.len() as i32)
}

#[test]
fn i0_of_square_indicator_is_its_area() {
    let g = GridSpec::new(2.0, 8).unwrap();
    let ind = ScalarField::from_fn(g, |x| c(if x.re.abs() < 1.0 && x.im.abs() < 1.0 { 1.0 } else { 0.0 }));
    let v = brute_force_ik(&ind, &[ind.clone()], 0).unwrap();
    assert!((v - 4.0).abs() < 1e-12);
}

#[test]
fn single_cell_uses_the_cell_averaged_kernel() {
    let g = GridSpec::new(1.0, 8).unwrap();
    let h = g.spacing();
    let cell = g.index(4, 4);
    let mut v = vec![c(0.0); g.len()];
    v[cell] = c(1.0);
    let f = ScalarField::from_values(g, v).unwrap();
    let mut t = vec![c(0.0); g.len()];
    t[cell] = c(2.5);
    let t = ScalarField::from_values(g, t).unwrap();
    let got = brute_force_ik(&t, &[f.clone(), f.clone(), f.clone()], 1).unwrap();
    let self_kernel = riesz_cell_integral(h) / (h * h);
    let want = h.powi(6) * self_kernel * self_kernel * 2.5;
    assert!((got - want).abs() < 1e-12 * want);
}

#[test]
fn brute_force_matches_coordinate_loops() {
    let g = GridSpec::new(2.0, 4).unwrap();
    let f = samples(g, 6, 3);
    let i1 = brute_force_ik(&f[0], &f[1..4], 1).unwrap();
    assert!((i1 - naive_ik(&f[0], &f[1..4])).abs() < 1e-12 * i1);
    let i2 = brute_force_ik(&f[0], &f[1..6], 2).unwrap();
    assert!((i2 - naive_ik(&f[0], &f[1..6])).abs() < 1e-12 * i2);
}

#[test]
fn brute_force_is_multilinear() {
    let g = GridSpec::new(3.0, 6).unwrap();
    let f = samples(g, 4, 5);
    let base = brute_force_ik(&f[0], &f[1..4], 1).unwrap();
    let doubled = brute_force_ik(&f[0], &[f[1].clone(), f[2].scale(c(2.0)), f[3].clone()], 1).unwrap();
    assert!((doubled - 2.0 * base).abs() < 1e-12 * base);
}

#[test]
fn brute_force_guards() {
    let big = GridSpec::new(1.0, 18).unwrap();
    let f = ScalarField::constant(big, c(1.0));
    assert!(brute_force_ik(&f, &[f.clone(), f.clone(), f.clone()], 1).is_err());
    let g = GridSpec::new(1.0, 10).unwrap();
    let f = ScalarField::constant(g, c(1.0));
    assert!(brute_force_ik(&f, &vec![f.clone(); 5], 2).is_err());
    assert!(brute_force_ik(&f, &[f.clone()], 1).is_err());
    assert!(brute_force_ik(&f, &vec![f.clone(); 7], 3).is_err());
    let neg = ScalarField::constant(g, c(-1.0));
    assert!(brute_force_ik(&neg, &[f.clone()], 0).is_err());
}

#[test]
fn reduction_never_increases_i() {
    let g = GridSpec::new(3.0, 6).unwrap();
    let f = samples(g, 80, 17);
    for chunk in f.chunks(4) {
        let (lhs, rhs) = reduction_pair(&chunk[0], [&chunk[1], &chunk[2], &chunk[3]], 0).unwrap();
        assert!(lhs <= rhs * (1.0 + 1e-9), "{lhs} > {rhs}");
    }
}

#[test]
fn inductive_step_scaling_and_zeros() {
    let g = GridSpec::new(3.0, 16).unwrap();
    let f = samples(g, 3, 23);
    let base = inductive_step(&f[0], &f[1], &f[2], 0).unwrap();
    let k = 3.0;
    let scaled = inductive_step(&f[0].scale(c(k)), &f[1].scale(c(k)), &f[2].scale(c(k)), 0).unwrap();
    let rel = |a: &ScalarField, b: &ScalarField| (a - b).l2_norm() / b.l2_norm();
    assert!(rel(&scaled.t1, &base.t1.scale(c(k))) < 1e-12);
    assert!(rel(&scaled.q2_tilde, &base.q2_tilde.scale(c(k * k))) < 1e-12);

    let zero = ScalarField::zeros(g);
    let z = inductive_step(&zero, &zero, &f[2], 0).unwrap();
    assert!(z.t1.is_zero() && z.q2_tilde.is_zero());
    assert!(inductive_step(&f[0].scale(c(-1.0)), &f[1], &f[2], 0).is_err());
}

#[test]
fn step_contracts_hold_with_the_sharp_constant() {
    let g = GridSpec::new(6.0, 64).unwrap();
    let f = samples(g, 9, 29);
    for (j, chunk) in f.chunks(3).enumerate() {
        let b = step_bounds(&chunk[0], &chunk[1], &chunk[2], j, SHARP_HLS_CONSTANT).unwrap();
        assert!(b.holds(0.05), "{b:?}");
        assert!(b.alpha_hat > 0.0 && b.alpha_hat.is_finite());
    }
}

#[test]
fn hls_ratio_rejects_bad_exponents() {
    let g = GridSpec::new(1.0, 8).unwrap();
    let f = ScalarField::constant(g, c(1.0));
    for p in [1.0, 2.0, 0.5, f64::NAN] {
        assert!(hls_ratio(&f, p).is_err());
    }
    assert_eq!(hls_ratio(&ScalarField::zeros(g), 1.5).unwrap(), 0.0);
}

#[test]
fn discrete_hls_ratio_is_dilation_covariant() {
    // f(lambda x) on half-width L has the same samples as f on half-width lambda L
    let f = |x: Complex64| c((-x.norm_sqr()).exp() * (1.0 + 0.3 * x.re));
    for lambda in [0.5, 2.0] {
        let a = GridSpec::new(6.0, 64).unwrap();
        let b = GridSpec::new(6.0 * lambda, 64).unwrap();
        let ra = hls_ratio(&ScalarField::from_fn(a, |x| f(x * lambda)), 4.0 / 3.0).unwrap();
        let rb = hls_ratio(&ScalarField::from_fn(b, f), 4.0 / 3.0).unwrap();
        assert!((ra / rb - 1.0).abs() < 1e-12, "{ra} {rb}");
    }
}

#[test]
fn extremizer_approaches_the_sharp_constant() {
    let g = GridSpec::new(50.0, 256).unwrap();
    let r = hls_ratio(&hls_extremizer(g, 1.0), 4.0 / 3.0).unwrap();
    assert!(r >= 0.95 * PI && r <= SHARP_HLS_CONSTANT, "{r}");
    assert!((SHARP_HLS_CONSTANT - 2.0 * PI.sqrt()).abs() < 1e-15);
}

#[test]
fn ensembles_are_seeded() {
    let g = GridSpec::new(3.0, 6).unwrap();
    let a = reduction_ensemble(g, 3, 1).unwrap();
    let b = reduction_ensemble(g, 3, 1).unwrap();
    assert_eq!(a.worst_ratio, b.worst_ratio);
    assert!(a.worst_ratio <= 1.0 + 1e-9 && a.empirical_k > 0.0);
}
