//! Run configuration: a single JSON document with defaults for every field.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::Symmetry;
use crate::grid::GridSpec;
use crate::neumann::SolveOptions;
use crate::potential::PotentialKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "L")]
    pub half_width: f64,
    pub n: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self { half_width: 6.0, n: 128 }
    }
}

/// Without `L` the z-grid is the centered `n`-point window of the scale-2 dual lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZGridConfig {
    pub n: usize,
    #[serde(rename = "L", skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
}

impl Default for ZGridConfig {
    fn default() -> Self {
        Self { n: 48, half_width: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PotentialConfig {
    pub kind: PotentialKind,
    /// matrix `L^2` norm of `Q`
    pub amplitude: f64,
    pub symmetry: Symmetry,
    pub seed: u64,
}

impl Default for PotentialConfig {
    fn default() -> Self {
        Self { kind: PotentialKind::Gaussian, amplitude: 0.5, symmetry: Symmetry::Hermitian, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub times: Vec<f64>,
    /// `L^2` size of the perturbation that makes the second datum of the continuity run
    pub perturbation: f64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self { times: vec![0.0, 0.1, 1.0], perturbation: 0.05 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimatesConfig {
    pub jmax: usize,
    pub ensemble_size: usize,
    pub seed: u64,
}

impl Default for EstimatesConfig {
    fn default() -> Self {
        Self { jmax: 20, ensemble_size: 50, seed: 0 }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub grid: GridConfig,
    pub zgrid: ZGridConfig,
    pub potential: PotentialConfig,
    pub solver: SolverConfig,
    pub evolve: EvolveConfig,
    pub estimates: EstimatesConfig,
}

fn config_err(e: impl std::fmt::Display) -> Error {
    Error::Config(e.to_string())
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: Config = serde_json::from_str(text).map_err(config_err)?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.xgrid()?;
        self.zgrid()?;
        let p = &self.potential;
        if !(p.amplitude >= 0.0 && p.amplitude.is_finite()) {
            return Err(config_err("potential.amplitude must be a finite nonnegative number"));
        }
        if !(self.solver.tol > 0.0) || self.solver.max_iter == 0 {
            return Err(config_err("solver.tol must be positive and solver.max_iter nonzero"));
        }
        if self.evolve.times.iter().any(|t| !t.is_finite()) || !(self.evolve.perturbation >= 0.0) {
            return Err(config_err("evolve.times must be finite and evolve.perturbation nonnegative"));
        }
        if self.estimates.jmax == 0 {
            return Err(config_err("estimates.jmax must be at least 1"));
        }
        Ok(())
    }

    pub fn xgrid(&self) -> Result<GridSpec> {
        GridSpec::new(self.grid.half_width, self.grid.n).map_err(config_err)
    }

    pub fn zgrid(&self) -> Result<GridSpec> {
        let z = &self.zgrid;
        match z.half_width {
            Some(l) => GridSpec::new(l, z.n),
            None => self.xgrid()?.dual_window(z.n),
        }
        .map_err(config_err)
    }

    pub fn solve_options(&self, workers: Option<usize>) -> SolveOptions {
        SolveOptions { tol: self.solver.tol, max_iter: self.solver.max_iter, workers }
    }

    /// Hex SHA-256 prefix of the canonical JSON form.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(serde_json::to_vec(self).expect("config serializes"));
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_missing_fields() {
        let c = Config::from_json(r#"{"grid": {"n": 64}, "potential": {"amplitude": 0.2}}"#).unwrap();
        assert_eq!(c.grid.n, 64);
        assert_eq!(c.grid.half_width, 6.0);
        assert_eq!(c.solver, SolverConfig::default());
        assert_eq!(c.potential.kind, PotentialKind::Gaussian);
        assert_eq!(Config::from_json("{}").unwrap(), Config::default());
    }

    #[test]
    fn default_z_grid_is_a_dual_window() {
        let z = Config::default().zgrid().unwrap();
        assert_eq!(z.n(), 48);
        assert!((z.half_width() - 2.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_documents() {
        for bad in [
            r#"{"grid": {"n": 7}}"#,
            r#"{"grid": {"L": -1}}"#,
            r#"{"potential": {"amplitude": -0.1}}"#,
            r#"{"solver": {"tol": 0}}"#,
            r#"{"gird": {}}"#,
            r#"{"potential": {"kind": "square"}}"#,
            "not json",
        ] {
            assert!(matches!(Config::from_json(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn hash_tracks_content() {
        let a = Config::default();
        let mut b = a.clone();
        assert_eq!(a.hash(), b.hash());
        b.potential.seed = 1;
        assert_ne!(a.hash(), b.hash());
        let round = Config::from_json(&a.to_json()).unwrap();
        assert_eq!(round.hash(), a.hash());
    }
}
