use std::f64::consts::PI;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;

use super::*;
use crate::potential::random_smooth_field;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn disk(grid: GridSpec) -> ScalarField {
    ScalarField::from_fn(grid, |x| if x.norm() < 1.0 { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn direct_conv(f: &ScalarField, kernel: impl Fn(Complex64) -> Complex64, self_weight: Complex64) -> ScalarField {
    let g = *f.grid();
    let w = g.cell_area();
    ScalarField::from_fn(g, |x| {
        g.points()
            .zip(f.values())
            .map(|(y, v)| if x == y { self_weight * v } else { kernel(x - y) * w * v })
            .sum()
    })
}

fn smooth_step(t: f64, a: f64, b: f64) -> f64 {
    // 1 on |t| <= a, 0 on |t| >= b, C-infinity in between
    let s = ((t.abs() - a) / (b - a)).clamp(0.0, 1.0);
    if s <= 0.0 {
        return 1.0;
    }
    if s >= 1.0 {
        return 0.0;
    }
    let e = |u: f64| if u > 0.0 { (-1.0 / u).exp() } else { 0.0 };
    e(1.0 - s) / (e(1.0 - s) + e(s))
}

/// Periodic spectral `d/d conj(x) = (d1 + i d2) / 2`.
fn spectral_dbar(f: &ScalarField) -> ScalarField {
    let g = f.grid();
    let n = g.n();
    let mut planner = FftPlanner::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let freq = |m: usize| {
        let mm = if m < n / 2 { m as f64 } else if m == n / 2 { 0.0 } else { m as f64 - n as f64 };
        PI * mm / g.half_width()
    };
    let mut a = f.values().to_vec();
    // rows then columns
    fwd.process(&mut a);
    let mut t = vec![c(0.0, 0.0); n * n];
    for j in 0..n {
        for k in 0..n {
            t[k * n + j] = a[j * n + k];
        }
    }
    fwd.process(&mut t);
    for k in 0..n {
        for j in 0..n {
            let (xi1, xi2) = (freq(j), freq(k));
            t[k * n + j] *= 0.5 * (c(0.0, xi1) + c(0.0, 1.0) * c(0.0, xi2));
        }
    }
    inv.process(&mut t);
    for j in 0..n {
        for k in 0..n {
            a[j * n + k] = t[k * n + j];
        }
    }
    inv.process(&mut a);
    let norm = 1.0 / (n * n) as f64;
    ScalarField::from_values(*g, a.into_iter().map(|v| v * norm).collect()).unwrap()
}

#[test]
fn zero_in_zero_out() {
    let g = GridSpec::new(2.0, 16).unwrap();
    let t = SingularTransforms::new(g);
    let z = ScalarField::zeros(g);
    assert!(t.cauchy_transform(&z).is_zero());
    assert!(t.anti_cauchy_transform(&z).is_zero());
    assert!(t.riesz_potential(&z).is_zero());
    assert!(t.apply_g(&MatrixField::zeros(g)).is_diagonal());
    assert!(t.apply_gz(&MatrixField::zeros(g), c(1.0, 2.0)).sup_norm() == 0.0);
}

#[test]
fn cauchy_of_disk_matches_direct_sum() {
    let g = GridSpec::new(2.0, 32).unwrap();
    let f = disk(g);
    let fast = cauchy_transform(&f);
    let slow = direct_conv(&f, |w| 1.0 / (PI * w), c(0.0, 0.0));
    assert!((&fast - &slow).sup_norm() < 1e-12);
}

#[test]
fn cauchy_of_disk_closed_form() {
    // C(1_D) = conj(z) inside, 1/z outside
    let g = GridSpec::new(2.0, 64).unwrap();
    let t = SingularTransforms::new(g);
    let f = disk(g);
    let cf = t.cauchy_transform(&f);
    let af = t.anti_cauchy_transform(&f);
    for (i, z) in g.points().enumerate() {
        let r = z.norm();
        if r < 0.6 {
            assert!((cf.values()[i] - z.conj()).norm() < 0.04, "{z} {}", cf.values()[i]);
            assert!((af.values()[i] - z).norm() < 0.04);
        } else if r > 1.4 {
            assert!((cf.values()[i] - 1.0 / z).norm() < 0.04, "{z} {}", cf.values()[i]);
        }
    }
}

#[test]
fn cauchy_inverts_dbar_in_interior() {
    let g = GridSpec::new(6.0, 128).unwrap();
    let f = ScalarField::from_fn(g, |x| {
        let t = x.norm_sqr() / 4.0;
        if t >= 1.0 { c(0.0, 0.0) } else { (1.0 - 1.0 / (1.0 - t)).exp() * c(1.0, 0.5 * x.re) }
    });
    let cf = cauchy_transform(&f);
    let window = ScalarField::from_fn(g, |x| c(smooth_step(x.re, 3.5, 5.5) * smooth_step(x.im, 3.5, 5.5), 0.0));
    let d = spectral_dbar(&(&cf * &window));
    let interior = ScalarField::from_fn(g, |x| {
        if x.re.abs() < 3.0 && x.im.abs() < 3.0 { c(1.0, 0.0) } else { c(0.0, 0.0) }
    });
    let err = (&(&d - &f) * &interior).l2_norm() / (&f * &interior).l2_norm();
    assert!(err <= 1e-2, "relative dbar error {err}");
}

#[test]
fn anti_cauchy_is_conjugate_for_real_input() {
    let g = GridSpec::new(3.0, 24).unwrap();
    let f = ScalarField::from_fn(g, |x| c((-x.norm_sqr()).exp() * (1.0 + x.re), 0.0));
    let t = SingularTransforms::new(g);
    assert_eq!(t.anti_cauchy_transform(&f), t.cauchy_transform(&f).conj());
    let h = ScalarField::from_fn(g, |x| x * x);
    assert_eq!(t.anti_cauchy_transform(&h), t.cauchy_transform(&h.conj()).conj());
}

#[test]
fn riesz_of_disk_at_origin() {
    let g = GridSpec::new(4.0, 128).unwrap();
    let r = riesz_potential(&disk(g));
    let m = g.n() / 2;
    let centre = (r.get(m - 1, m - 1) + r.get(m, m) + r.get(m - 1, m) + r.get(m, m - 1)) / 4.0;
    assert!(((centre.re - 2.0 * PI) / (2.0 * PI)).abs() < 0.02, "{centre}");
}

#[test]
fn riesz_matches_direct_sum_and_is_positive_monotone() {
    let g = GridSpec::new(2.0, 16).unwrap();
    let t = SingularTransforms::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let f = random_smooth_field(g, &mut rng).abs();
    let slow = direct_conv(&f, |w| c(1.0 / w.norm(), 0.0), c(t.riesz_table().self_weight(), 0.0));
    let fast = t.riesz_potential(&f);
    assert!((&fast - &slow).sup_norm() < 1e-11);
    assert!(fast.values().iter().all(|v| v.re >= 0.0 && v.im == 0.0));
    let bigger = f.map(|v| v + 0.1);
    let rb = t.riesz_potential(&bigger);
    assert!(rb.values().iter().zip(fast.values()).all(|(a, b)| a.re >= b.re));
}

#[test]
fn g_routes_rows_to_cauchy_and_anti_cauchy() {
    let g = GridSpec::new(1.5, 16).unwrap();
    let e = |s: f64| ScalarField::from_fn(g, move |x| (x * s).exp() * (-x.norm_sqr()).exp());
    let f = MatrixField::new(e(1.0), e(-0.5), e(0.25), e(2.0)).unwrap();
    let out = apply_g(&f);
    let cauchy = |v: &ScalarField| direct_conv(v, |w| 1.0 / (PI * w), c(0.0, 0.0));
    let anti = |v: &ScalarField| direct_conv(v, |w| 1.0 / (PI * w.conj()), c(0.0, 0.0));
    assert!((&out.m11 - &cauchy(&f.m11)).sup_norm() < 1e-12);
    assert!((&out.m12 - &cauchy(&f.m12)).sup_norm() < 1e-12);
    assert!((&out.m21 - &anti(&f.m21)).sup_norm() < 1e-12);
    assert!((&out.m22 - &anti(&f.m22)).sup_norm() < 1e-12);

    let only = MatrixField::new(e(1.0), ScalarField::zeros(g), ScalarField::zeros(g), ScalarField::zeros(g)).unwrap();
    let r = apply_g(&only);
    assert!(r.m12.is_zero() && r.m21.is_zero() && r.m22.is_zero());
    assert_eq!(r.m11, cauchy_transform(&only.m11));
}

#[test]
fn gz_equals_g_on_diagonal() {
    let g = GridSpec::new(3.0, 32).unwrap();
    let t = SingularTransforms::new(g);
    let e = |s: f64| ScalarField::from_fn(g, move |x| c(s, x.im) * (-x.norm_sqr()).exp());
    let diag = MatrixField::new(e(1.0), ScalarField::zeros(g), ScalarField::zeros(g), e(-2.0)).unwrap();
    for z in [c(0.0, 0.0), c(1.3, -0.4), c(-5.0, 2.0)] {
        let d = t.apply_gz(&diag, z).zip_entries(&t.apply_g(&diag), |a, b| a - b);
        assert!(d.sup_norm() <= 1e-12);
    }
    let full = MatrixField::new(e(1.0), e(0.5), e(-0.5), e(2.0)).unwrap();
    assert_eq!(t.apply_gz(&full, c(0.0, 0.0)), t.apply_g(&full));
}

#[test]
fn transforms_commute_with_reflection() {
    let g = GridSpec::new(2.0, 20).unwrap();
    let t = SingularTransforms::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let f = random_smooth_field(g, &mut rng);
    let fr = f.negated_argument();
    // odd kernel flips sign, even kernel does not
    let lhs = t.cauchy_transform(&fr);
    let rhs = t.cauchy_transform(&f).negated_argument().scale(c(-1.0, 0.0));
    assert!((&lhs - &rhs).sup_norm() < 1e-12);
    let lhs = t.riesz_potential(&fr);
    let rhs = t.riesz_potential(&f).negated_argument();
    assert!((&lhs - &rhs).sup_norm() < 1e-12);
}

#[test]
fn fourier_of_gaussian() {
    let g = GridSpec::new(6.0, 128).unwrap();
    let f = ScalarField::from_fn(g, |x| c((-x.norm_sqr()).exp(), 0.0));
    let ff = fourier_transform(&f, 2.0).unwrap();
    let want = ScalarField::from_fn(*ff.grid(), |z| c(PI * (-z.norm_sqr()).exp(), 0.0));
    assert!((&ff - &want).sup_norm() < 1e-6);
    let ratio = ff.l2_norm() / f.l2_norm();
    assert!((ratio / PI - 1.0).abs() < 1e-8);
}

#[test]
fn fourier_plancherel_any_scale() {
    let g = GridSpec::new(4.0, 32).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let f = random_smooth_field(g, &mut rng);
    for s in [0.5, 2.0, 3.0] {
        let ff = fourier_transform(&f, s).unwrap();
        let want = 2.0 * PI / s * f.l2_norm();
        assert!((ff.l2_norm() / want - 1.0).abs() < 1e-8);
    }
}

#[test]
fn hls_ratio_respects_sharp_constant() {
    // Lieb's sharp (4/3, 4) constant for 1/|x| in the plane is 2 sqrt(pi); a
    // Gaussian already exceeds pi.
    let sharp = 2.0 * PI.sqrt();
    let g = GridSpec::new(6.0, 64).unwrap();
    let t = SingularTransforms::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..10 {
        let f = random_smooth_field(g, &mut rng).abs();
        let lhs = t.riesz_potential(&f).lp_norm(4.0).unwrap();
        let rhs = f.lp_norm(4.0 / 3.0).unwrap();
        assert!(lhs <= sharp * 1.02 * rhs, "{}", lhs / rhs);
    }
    let gauss = ScalarField::from_fn(g, |x| c((-x.norm_sqr()).exp(), 0.0));
    let ratio = t.riesz_potential(&gauss).lp_norm(4.0).unwrap() / gauss.lp_norm(4.0 / 3.0).unwrap();
    assert!(ratio > PI && ratio < sharp, "{ratio}");
}
