//! Test-data generators for decaying smooth potentials.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::field::{OffDiagPotential, ScalarField, Symmetry};
use crate::grid::GridSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    /// `exp(-|x|^2)`
    Gaussian,
    /// `exp(1 - 1/(1 - |x|^2/R^2))` inside radius `R = 2`, zero outside.
    Bump,
    /// Seeded sum of plane waves with `|xi| <= 2` under a Gaussian envelope.
    RandomSmooth,
}

const BUMP_RADIUS: f64 = 2.0;
const RANDOM_MODES: usize = 12;
const RANDOM_MAX_WAVENUMBER: f64 = 2.0;
const RANDOM_ENVELOPE_WIDTH: f64 = 1.2;

/// Generates a potential and rescales it to `matrix_l2_norm == amplitude`.
pub fn make_potential(
    kind: PotentialKind,
    amplitude: f64,
    symmetry: Symmetry,
    seed: u64,
    grid: GridSpec,
) -> Result<OffDiagPotential> {
    if !(amplitude.is_finite() && amplitude >= 0.0) {
        return Err(invalid(format!("amplitude must be >= 0, got {amplitude}")));
    }
    if amplitude == 0.0 {
        return Ok(OffDiagPotential::from_parts(
            ScalarField::zeros(grid),
            ScalarField::zeros(grid),
            symmetry,
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let profile = match kind {
        PotentialKind::Gaussian => ScalarField::from_fn(grid, |x| Complex64::new((-x.norm_sqr()).exp(), 0.0)),
        PotentialKind::Bump => ScalarField::from_fn(grid, bump),
        PotentialKind::RandomSmooth => random_smooth_field(grid, &mut rng),
    };
    let raw = match symmetry {
        Symmetry::None if kind == PotentialKind::RandomSmooth => {
            let q21 = random_smooth_field(grid, &mut rng);
            OffDiagPotential::from_parts(profile, q21, Symmetry::None)
        }
        s => OffDiagPotential::with_symmetry(profile, s),
    };
    let norm = raw.matrix_l2_norm();
    if norm == 0.0 {
        return Err(invalid(format!("generated profile vanishes on {grid}")));
    }
    let c = Complex64::new(amplitude / norm, 0.0);
    Ok(OffDiagPotential::from_parts(raw.q12().scale(c), raw.q21().scale(c), symmetry))
}

/// Scalar initial datum `q` with `||q||_2 = amplitude`.
pub fn make_scalar(kind: PotentialKind, amplitude: f64, seed: u64, grid: GridSpec) -> Result<ScalarField> {
    let p = make_potential(kind, amplitude * std::f64::consts::SQRT_2, Symmetry::Hermitian, seed, grid)?;
    Ok(p.q12().clone())
}

fn bump(x: Complex64) -> Complex64 {
    let t = x.norm_sqr() / (BUMP_RADIUS * BUMP_RADIUS);
    if t >= 1.0 {
        Complex64::new(0.0, 0.0)
    } else {
        Complex64::new((1.0 - 1.0 / (1.0 - t)).exp(), 0.0)
    }
}

/// Unnormalized random smooth field. Draw order is fixed, so a seed pins the field bitwise.
pub fn random_smooth_field(grid: GridSpec, rng: &mut impl Rng) -> ScalarField {
    let modes: Vec<(f64, f64, Complex64)> = (0..RANDOM_MODES)
        .map(|_| {
            let r = RANDOM_MAX_WAVENUMBER * rng.gen::<f64>().sqrt();
            let theta = std::f64::consts::TAU * rng.gen::<f64>();
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            (r * theta.cos(), r * theta.sin(), Complex64::new(re, im))
        })
        .collect();
    let center = Complex64::new(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5));
    let w2 = 2.0 * RANDOM_ENVELOPE_WIDTH * RANDOM_ENVELOPE_WIDTH;
    ScalarField::from_fn(grid, |x| {
        let env = (-(x - center).norm_sqr() / w2).exp();
        let s: Complex64 = modes
            .iter()
            .map(|&(k1, k2, c)| c * Complex64::from_polar(1.0, k1 * x.re + k2 * x.im))
            .sum();
        s * env
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> GridSpec {
        GridSpec::new(6.0, 64).unwrap()
    }

    #[test]
    fn zero_amplitude_gives_zero() {
        for kind in [PotentialKind::Gaussian, PotentialKind::Bump, PotentialKind::RandomSmooth] {
            let p = make_potential(kind, 0.0, Symmetry::Hermitian, 3, grid()).unwrap();
            assert!(p.q12().is_zero() && p.q21().is_zero());
        }
    }

    #[test]
    fn rejects_negative_amplitude() {
        assert!(make_potential(PotentialKind::Gaussian, -1.0, Symmetry::None, 0, grid()).is_err());
    }

    #[test]
    fn gaussian_normalization_constant() {
        let g = GridSpec::new(6.0, 128).unwrap();
        let p = make_potential(PotentialKind::Gaussian, 1.0, Symmetry::Hermitian, 0, g).unwrap();
        let c = 1.0 / (2f64.sqrt() * (PI / 2.0).sqrt());
        let centre = g.n() / 2;
        let x = g.point(centre, centre);
        let want = c * (-x.norm_sqr()).exp();
        assert!((p.q12().get(centre, centre).re - want).abs() < 1e-6);
        assert_eq!(p.q21(), &p.q12().conj());
    }

    #[test]
    fn seeded_fields_are_bitwise_reproducible() {
        let a = make_potential(PotentialKind::RandomSmooth, 0.7, Symmetry::None, 42, grid()).unwrap();
        let b = make_potential(PotentialKind::RandomSmooth, 0.7, Symmetry::None, 42, grid()).unwrap();
        assert_eq!(a, b);
        let c = make_potential(PotentialKind::RandomSmooth, 0.7, Symmetry::None, 43, grid()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn amplitude_and_tags_are_exact() {
        for sym in [Symmetry::Hermitian, Symmetry::Skew, Symmetry::None] {
            for kind in [PotentialKind::Gaussian, PotentialKind::Bump, PotentialKind::RandomSmooth] {
                let p = make_potential(kind, 0.9, sym, 7, grid()).unwrap();
                assert!((p.matrix_l2_norm() - 0.9).abs() < 1e-12);
                assert!(p.symmetry_holds(), "{kind:?} {sym:?}");
            }
        }
    }
}
