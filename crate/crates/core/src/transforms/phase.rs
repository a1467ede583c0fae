use num_complex::Complex64;

use crate::field::{MatrixField, ScalarField};
use crate::grid::GridSpec;

/// Diagonal entries of `A(x, z)` sampled over a grid for a fixed `z`:
/// `a1 = exp(i x conj(z) + i conj(x) z)` and `a2 = exp(-i x z - i conj(x) conj(z))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    pub z: Complex64,
    pub a1: ScalarField,
    pub a2: ScalarField,
}

/// `a1(x, z) = exp(2i Re(x conj z))`.
pub fn a1(x: Complex64, z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * (x.re * z.re + x.im * z.im))
}

/// `a2(x, z) = exp(-2i Re(x z))`.
pub fn a2(x: Complex64, z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, -2.0 * (x.re * z.re - x.im * z.im))
}

pub fn phase_field(grid: GridSpec, z: Complex64) -> PhaseField {
    PhaseField {
        z,
        a1: ScalarField::from_fn(grid, |x| a1(x, z)),
        a2: ScalarField::from_fn(grid, |x| a2(x, z)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Off-diagonal part multiplied by `A^-1`.
    Forward,
    /// Off-diagonal part multiplied by `A`.
    Inverse,
}

/// The conjugation `E_z f = diag(f) + A_z^-1 off(f)` and its inverse.
pub fn apply_ez(f: &MatrixField, z: Complex64, direction: Direction) -> MatrixField {
    let p = phase_field(*f.grid(), z);
    apply_ez_with(f, &p, direction)
}

pub fn apply_ez_with(f: &MatrixField, p: &PhaseField, direction: Direction) -> MatrixField {
    let (c1, c2) = match direction {
        Direction::Forward => (p.a1.conj(), p.a2.conj()),
        Direction::Inverse => (p.a1.clone(), p.a2.clone()),
    };
    MatrixField {
        m11: f.m11.clone(),
        m12: &f.m12 * &c1,
        m21: &f.m21 * &c2,
        m22: f.m22.clone(),
    }
}
