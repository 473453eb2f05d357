//! Experiment configuration, read from TOML with snake_case keys.

use std::f64::consts::TAU;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::harness::ensemble::EnsembleSpec;
use crate::kernel_lab::{geometric_grid, SuiteConfig};
use crate::spectral::{BandSpec, FieldLayout, TimeGrid, VerticalGrid, WavenumberLattice};
use crate::{Error, Result};

/// Everything one experiment run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    /// Torus side L.
    pub length: f64,
    pub dim: usize,
    /// Bandwidths R to scan.
    pub r_grid: Vec<f64>,
    pub nz: usize,
    pub nt: usize,
    /// Height of the truncated half-line grids.
    pub zmax: f64,
    /// Time horizon t₀.
    pub horizon: f64,
    pub ensemble: EnsembleSpec,
    /// Cutoff transition half-width for the localization.
    pub delta: f64,
    /// Number of doubled resolutions run after the base one.
    pub refine: usize,
    pub heat_solver: String,
    pub out: Option<String>,
    /// Allowed factor between the ensemble max ratios of successive levels.
    pub refine_tolerance: f64,
    /// Allowed factor by which the max ratio may grow from one R to the next smaller one.
    pub r_growth_tolerance: f64,
    /// Allowed norm change factor at the finest level of a convergence study.
    pub cauchy_tolerance: f64,
    pub suite: SuiteConfig,
}

/// Eight log-spaced bandwidths in `[0.05, 1]·L/2π`.
pub fn default_r_grid(length: f64) -> Vec<f64> {
    let s = length / TAU;
    geometric_grid(0.05 * s, s, 8)
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: "mre".into(),
            length: TAU,
            dim: 2,
            r_grid: default_r_grid(TAU),
            nz: 32,
            nt: 16,
            zmax: 5.0,
            horizon: 1.0,
            ensemble: EnsembleSpec::default(),
            delta: 1.0 / 6.0,
            refine: 0,
            heat_solver: "stepping".into(),
            out: None,
            refine_tolerance: 2.0,
            r_growth_tolerance: 2.0,
            cauchy_tolerance: 1.1,
            suite: SuiteConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig =
            toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Sizes positive and every R admits a nonempty band.
    pub fn validate(&self) -> Result<()> {
        if self.nz < 2 || self.nt < 1 {
            return Err(Error::Config(format!(
                "nz = {} and nt = {} must be at least 2 and 1",
                self.nz, self.nt
            )));
        }
        for (name, v) in [
            ("zmax", self.zmax),
            ("horizon", self.horizon),
            ("length", self.length),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} = {v} must be positive")));
            }
        }
        if !(self.delta > 0.0 && self.delta < 0.25) {
            return Err(Error::Config(format!(
                "delta = {} must lie in (0, 1/4)",
                self.delta
            )));
        }
        for &r in &self.r_grid {
            self.band(r)?;
            WavenumberLattice::build(self.band(r)?, 0)?;
        }
        Ok(())
    }

    pub fn band(&self, r: f64) -> Result<BandSpec> {
        BandSpec::new(self.length, self.dim, r)
    }

    /// `(nz, nt)` at refinement level `level`.
    pub fn resolution(&self, level: usize) -> (usize, usize) {
        (self.nz << level, self.nt << level)
    }

    pub fn strip_layout(&self, r: f64, level: usize) -> Result<FieldLayout> {
        let (nz, nt) = self.resolution(level);
        Ok(FieldLayout::new(
            WavenumberLattice::build(self.band(r)?, 0)?,
            VerticalGrid::strip(nz)?,
            TimeGrid::new(self.horizon, nt)?,
        ))
    }

    pub fn half_line_layout(&self, r: f64, level: usize) -> Result<FieldLayout> {
        let (nz, nt) = self.resolution(level);
        Ok(FieldLayout::new(
            WavenumberLattice::build(self.band(r)?, 0)?,
            VerticalGrid::half_line(self.zmax, nz)?,
            TimeGrid::new(self.horizon, nt)?,
        ))
    }

    /// Ensemble recipe with the pair count capped by what the band offers.
    pub fn ensemble_for(&self, layout: &FieldLayout) -> EnsembleSpec {
        let pairs = layout.lattice.representatives().len();
        EnsembleSpec {
            n_modes: self.ensemble.n_modes.min(pairs),
            ..self.ensemble
        }
    }

    /// Appendix-suite parameters: geometry, R grid and seed come from this config.
    pub fn suite_config(&self) -> SuiteConfig {
        SuiteConfig {
            dim: self.dim,
            length: self.length,
            r_grid: self.r_grid.clone(),
            seed: self.ensemble.seed,
            ..self.suite.clone()
        }
    }
}
