//! Run configuration: one JSON document per run.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use coherence_core::detection::{DetectionPlan, DetectorSpec};
use coherence_core::fock::FockConfig;
use coherence_core::{build_two_mode_example, G3Kind, ModeSystem};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA: &str = "coherence-run/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema: String,
    pub system: SystemParams,
    #[serde(default = "default_kind")]
    pub kind: G3Kind,
    #[serde(default)]
    pub grid: Grid,
    #[serde(default)]
    pub detectors: Vec<DetectorSpec>,
    #[serde(default)]
    pub distinguishable: bool,
    /// Efficiency values keyed by canonical name, e.g. `eta_s(r3,r4)`.
    #[serde(default)]
    pub efficiencies: BTreeMap<String, f64>,
    #[serde(default)]
    pub oracle: OracleSection,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_kind() -> G3Kind {
    G3Kind::X
}

/// Two-mode model in units of the coupling constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    pub kappa1: f64,
    pub kappa2: f64,
    pub nbar1: f64,
    pub nbar2: f64,
    pub g: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let span = self.max - self.min;
        let last = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + span * i as f64 / last
                }
            })
            .collect()
    }

    fn validate(&self, name: &str) -> Result<(), CliError> {
        if self.steps < 2 {
            return Err(CliError::Config(format!(
                "grid.{name}.steps must be at least 2, got {}",
                self.steps
            )));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min >= 0.0 && self.max > self.min) {
            return Err(CliError::Config(format!(
                "grid.{name} needs finite 0 <= min < max, got [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub tau1: Axis,
    pub tau2: Axis,
}

impl Default for Grid {
    fn default() -> Self {
        let axis = Axis {
            min: 0.0,
            max: 10.0,
            steps: 21,
        };
        Self { tau1: axis, tau2: axis }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleSection {
    pub cutoff: usize,
    pub tolerance: f64,
    pub max_time: f64,
    pub max_step: f64,
    pub edge_tolerance: f64,
    /// `(tau1, tau2)` pairs with `tau2 <= tau1`.
    pub points: Vec<(f64, f64)>,
    /// Largest accepted relative deviation between engine and oracle.
    pub max_relative_error: f64,
}

impl Default for OracleSection {
    fn default() -> Self {
        let f = FockConfig::default();
        Self {
            cutoff: f.cutoff,
            tolerance: f.tolerance,
            max_time: f.max_time,
            max_step: f.max_step,
            edge_tolerance: f.edge_tolerance,
            points: vec![(0.5, 0.25), (1.0, 0.5), (2.0, 1.0), (5.0, 2.0)],
            max_relative_error: 0.01,
        }
    }
}

impl OracleSection {
    pub fn fock_config(&self) -> FockConfig {
        FockConfig {
            cutoff: self.cutoff,
            tolerance: self.tolerance,
            max_time: self.max_time,
            max_step: self.max_step,
            edge_tolerance: self.edge_tolerance,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if cfg.schema != SCHEMA {
            return Err(CliError::Config(format!(
                "unsupported schema '{}', expected '{SCHEMA}'",
                cfg.schema
            )));
        }
        cfg.grid.tau1.validate("tau1")?;
        cfg.grid.tau2.validate("tau2")?;
        Ok(cfg)
    }

    pub fn system(&self) -> Result<ModeSystem, CliError> {
        let p = &self.system;
        Ok(build_two_mode_example(p.kappa1, p.kappa2, p.nbar1, p.nbar2, p.g)?)
    }

    pub fn plan(&self) -> Result<DetectionPlan, CliError> {
        if self.detectors.is_empty() {
            return Err(CliError::Config("config has no detectors".into()));
        }
        Ok(DetectionPlan::new(self.detectors.clone())?)
    }
}
