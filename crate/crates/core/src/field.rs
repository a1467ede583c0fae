//! Sampled complex fields on a [`GridSpec`] and the 2x2 matrix fields built from them.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::grid::GridSpec;

/// Complex function sampled at the cell centers of a grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: GridSpec,
    values: Vec<Complex64>,
}

impl ScalarField {
    pub fn zeros(grid: GridSpec) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn constant(grid: GridSpec, c: Complex64) -> Self {
        Self { grid, values: vec![c; grid.len()] }
    }

    pub fn from_values(grid: GridSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(invalid(format!(
                "expected {} samples for {grid}, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(invalid(format!("non-finite sample at index {i}")));
        }
        Ok(Self { grid, values })
    }

    /// Trusted constructor for internal hot paths; finiteness is not checked.
    pub(crate) fn from_raw(grid: GridSpec, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn from_fn(grid: GridSpec, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = grid.points().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.values[self.grid.index(j, k)]
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        Self { grid: self.grid, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        assert!(self.grid.same_as(&other.grid), "zip_map on mismatched grids");
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Self { grid: self.grid, values }
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn abs(&self) -> Self {
        self.map(|v| Complex64::new(v.norm(), 0.0))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| v.re == 0.0 && v.im == 0.0)
    }

    pub fn is_nonnegative_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0 && v.re >= 0.0)
    }

    /// Field with `f(x) -> f(-x)`.
    pub fn negated_argument(&self) -> Self {
        let values = (0..self.grid.len()).map(|i| self.values[self.grid.negated_index(i)]).collect();
        Self { grid: self.grid, values }
    }

    /// Field with `f(x) -> f(conj(x))`.
    pub fn conjugated_argument(&self) -> Self {
        let values =
            (0..self.grid.len()).map(|i| self.values[self.grid.conjugate_index(i)]).collect();
        Self { grid: self.grid, values }
    }

    /// Nearest-bin transfer onto `target`; target cells outside this grid get 0.
    pub fn resample_nearest(&self, target: &GridSpec) -> Self {
        let n = target.n();
        let lookup: Vec<Option<usize>> =
            (0..n).map(|j| self.grid.nearest_index_1d(target.coord(j))).collect();
        let mut values = vec![Complex64::new(0.0, 0.0); target.len()];
        for j in 0..n {
            let Some(sj) = lookup[j] else { continue };
            for k in 0..n {
                if let Some(sk) = lookup[k] {
                    values[target.index(j, k)] = self.values[self.grid.index(sj, sk)];
                }
            }
        }
        Self { grid: *target, values }
    }

    /// Discrete `L^p` norm, `(h^2 sum |f|^p)^(1/p)`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        lp_norm(self, p)
    }

    pub fn l2_norm(&self) -> f64 {
        (self.grid.cell_area() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        self.zip_map(rhs, |a, b| a * b)
    }
}

/// Midpoint-rule `L^p` norm. Rejects `p < 1` and non-finite `p`.
pub fn lp_norm(f: &ScalarField, p: f64) -> Result<f64> {
    if !p.is_finite() || p < 1.0 {
        return Err(invalid(format!("L^p norm needs finite p >= 1, got {p}")));
    }
    let w = f.grid.cell_area();
    let sum: f64 = if p == 2.0 {
        f.values.iter().map(|v| v.norm_sqr()).sum()
    } else {
        f.values.iter().map(|v| v.norm().powf(p)).sum()
    };
    Ok((w * sum).powf(1.0 / p))
}

/// Symmetry class of an off-diagonal potential with respect to `Q* = +-Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    None,
    /// `q21 = conj(q12)`, i.e. `Q* = Q`.
    Hermitian,
    /// `q21 = -conj(q12)`, i.e. `Q* = -Q`.
    Skew,
}

/// 2x2 matrix field with vanishing diagonal. Used both for potentials `Q` and
/// scattering data `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct OffDiagPotential {
    q12: ScalarField,
    q21: ScalarField,
    symmetry: Symmetry,
}

impl OffDiagPotential {
    pub fn new(q12: ScalarField, q21: ScalarField) -> Result<Self> {
        if !q12.grid.same_as(&q21.grid) {
            return Err(Error::GridMismatch(format!("{} vs {}", q12.grid, q21.grid)));
        }
        Ok(Self { q12, q21, symmetry: Symmetry::None })
    }

    /// Builds the partner entry from `q12` so the tag holds exactly.
    pub fn with_symmetry(q12: ScalarField, symmetry: Symmetry) -> Self {
        let q21 = match symmetry {
            Symmetry::Hermitian => q12.conj(),
            Symmetry::Skew => q12.map(|v| -v.conj()),
            Symmetry::None => q12.clone(),
        };
        Self { q12, q21, symmetry }
    }

    /// Hermitian potential `[[0, q], [conj q, 0]]`.
    pub fn hermitian(q: ScalarField) -> Self {
        Self::with_symmetry(q, Symmetry::Hermitian)
    }

    pub fn zeros(grid: GridSpec) -> Self {
        Self {
            q12: ScalarField::zeros(grid),
            q21: ScalarField::zeros(grid),
            symmetry: Symmetry::Hermitian,
        }
    }

    pub(crate) fn from_parts(q12: ScalarField, q21: ScalarField, symmetry: Symmetry) -> Self {
        Self { q12, q21, symmetry }
    }

    pub fn grid(&self) -> &GridSpec {
        self.q12.grid()
    }

    pub fn q12(&self) -> &ScalarField {
        &self.q12
    }

    pub fn q21(&self) -> &ScalarField {
        &self.q21
    }

    pub fn symmetry(&self) -> Symmetry {
        self.symmetry
    }

    /// True when the stored entries satisfy the symmetry tag pointwise (exactly).
    pub fn symmetry_holds(&self) -> bool {
        let pairs = self.q12.values.iter().zip(&self.q21.values);
        match self.symmetry {
            Symmetry::None => true,
            Symmetry::Hermitian => pairs.into_iter().all(|(a, b)| *b == a.conj()),
            Symmetry::Skew => pairs.into_iter().all(|(a, b)| *b == -a.conj()),
        }
    }

    pub fn matrix_l2_norm(&self) -> f64 {
        let a = self.q12.l2_norm();
        let b = self.q21.l2_norm();
        (a * a + b * b).sqrt()
    }

    pub fn map_entries(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Self { q12: f(&self.q12), q21: f(&self.q21), symmetry: Symmetry::None }
    }

    pub fn scale(&self, c: f64) -> Self {
        let c = Complex64::new(c, 0.0);
        Self { q12: self.q12.scale(c), q21: self.q21.scale(c), symmetry: self.symmetry }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self { q12: &self.q12 - &other.q12, q21: &self.q21 - &other.q21, symmetry: Symmetry::None }
    }

    pub fn resample_nearest(&self, target: &GridSpec) -> Self {
        Self {
            q12: self.q12.resample_nearest(target),
            q21: self.q21.resample_nearest(target),
            symmetry: self.symmetry,
        }
    }

    pub fn to_matrix(&self) -> MatrixField {
        let g = *self.grid();
        MatrixField {
            m11: ScalarField::zeros(g),
            m12: self.q12.clone(),
            m21: self.q21.clone(),
            m22: ScalarField::zeros(g),
        }
    }
}

/// Full 2x2 matrix field; all four entries share one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixField {
    pub m11: ScalarField,
    pub m12: ScalarField,
    pub m21: ScalarField,
    pub m22: ScalarField,
}

impl MatrixField {
    pub fn new(m11: ScalarField, m12: ScalarField, m21: ScalarField, m22: ScalarField) -> Result<Self> {
        let g = m11.grid;
        if [&m12, &m21, &m22].iter().any(|f| !f.grid.same_as(&g)) {
            return Err(Error::GridMismatch("matrix entries on different grids".into()));
        }
        Ok(Self { m11, m12, m21, m22 })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        let z = ScalarField::zeros(grid);
        Self { m11: z.clone(), m12: z.clone(), m21: z.clone(), m22: z }
    }

    pub fn identity(grid: GridSpec) -> Self {
        let one = ScalarField::constant(grid, Complex64::new(1.0, 0.0));
        let z = ScalarField::zeros(grid);
        Self { m11: one.clone(), m12: z.clone(), m21: z, m22: one }
    }

    pub fn grid(&self) -> &GridSpec {
        self.m11.grid()
    }

    pub fn entries(&self) -> [&ScalarField; 4] {
        [&self.m11, &self.m12, &self.m21, &self.m22]
    }

    pub fn map_entries(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Self { m11: f(&self.m11), m12: f(&self.m12), m21: f(&self.m21), m22: f(&self.m22) }
    }

    pub fn zip_entries(&self, other: &Self, f: impl Fn(&ScalarField, &ScalarField) -> ScalarField) -> Self {
        Self {
            m11: f(&self.m11, &other.m11),
            m12: f(&self.m12, &other.m12),
            m21: f(&self.m21, &other.m21),
            m22: f(&self.m22, &other.m22),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.m12.is_zero() && self.m21.is_zero()
    }

    pub fn is_off_diagonal(&self) -> bool {
        self.m11.is_zero() && self.m22.is_zero()
    }

    pub fn matrix_l2_norm(&self) -> f64 {
        self.entries().iter().map(|f| f.l2_norm().powi(2)).sum::<f64>().sqrt()
    }

    /// `(sum_jk ||F^jk||_4^4)^(1/4)`.
    pub fn entrywise_l4_norm(&self) -> f64 {
        entrywise_l4(self.entries().iter().map(|f| f.values()), self.grid().cell_area())
    }

    pub fn sup_norm(&self) -> f64 {
        self.entries().iter().map(|f| f.sup_norm()).fold(0.0, f64::max)
    }

    /// Pointwise product `Q m` with an off-diagonal left factor.
    pub fn left_mul_offdiag(&self, q: &OffDiagPotential) -> Self {
        Self {
            m11: q.q12() * &self.m21,
            m12: q.q12() * &self.m22,
            m21: q.q21() * &self.m11,
            m22: q.q21() * &self.m12,
        }
    }
}

/// Entrywise `L^4` norm over raw slices sharing a cell area.
pub(crate) fn entrywise_l4<'a>(entries: impl Iterator<Item = &'a [Complex64]>, area: f64) -> f64 {
    let s: f64 = entries.flat_map(|e| e.iter()).map(|v| v.norm_sqr() * v.norm_sqr()).sum();
    (area * s).powf(0.25)
}
