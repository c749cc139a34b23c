use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vhm_core::model::{CutoffFamily, Profile};
use vhm_core::{Modes, Src};

use crate::error::LabError;

/// Experiment description read from a single JSON document.
///
/// Unknown keys are rejected. `v` defaults to the zero source. `tolerances`
/// overrides the default tolerance of a check by name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(rename = "M")]
    pub m: usize,
    pub omega: Vec<f64>,
    pub mu: f64,
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<Vec<f64>>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub sweep: SweepConfig,
    /// Cutoff of the pencil spectrum listings.
    #[serde(rename = "spectrum_N", default = "default_spectrum_n")]
    pub spectrum_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn default_spectrum_n() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "default_profile")]
    pub profile: Profile,
    #[serde(default = "default_lambdas")]
    pub lambdas: Vec<usize>,
    #[serde(default = "default_betas")]
    pub betas: Vec<f64>,
    #[serde(default)]
    pub t_grid: TimeGrid,
}

fn default_profile() -> Profile {
    Profile::Severe
}

fn default_lambdas() -> Vec<usize> {
    (1..=20).map(|k| 10 * k).collect()
}

fn default_betas() -> Vec<f64> {
    vec![0.5, 1.0, 2.0, 5.0, 10.0, 20.0]
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            profile: default_profile(),
            lambdas: default_lambdas(),
            betas: default_betas(),
            t_grid: TimeGrid::default(),
        }
    }
}

/// `points` equally spaced times from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl Default for TimeGrid {
    fn default() -> Self {
        Self {
            start: -6.0,
            stop: 6.0,
            points: 64,
        }
    }
}

impl TimeGrid {
    pub fn times(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.points - 1) as f64;
        (0..self.points).map(|j| self.start + step * j as f64).collect()
    }
}

pub fn parse_config(path: &Path) -> Result<ExperimentConfig, LabError> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<ExperimentConfig, LabError> {
    let cfg: ExperimentConfig =
        serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn invalid(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), LabError> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(invalid("mu must be > 0"));
        }
        if self.m == 0 {
            return Err(invalid("M must be >= 1"));
        }
        if self.omega.len() != self.m {
            return Err(invalid(format!(
                "omega has {} entries but M is {}",
                self.omega.len(),
                self.m
            )));
        }
        if let Some(w) = self.omega.iter().find(|&&w| !(w >= self.mu) || !w.is_finite()) {
            return Err(invalid(format!("omega entry {w} is below mu = {}", self.mu)));
        }
        if self.n == 0 {
            return Err(invalid("N must be >= 1"));
        }
        if self.spectrum_n == 0 {
            return Err(invalid("spectrum_N must be >= 1"));
        }
        if let Some(v) = &self.v {
            if v.len() != self.m {
                return Err(invalid(format!("v has {} entries but M is {}", v.len(), self.m)));
            }
            if v.iter().any(|x| !x.is_finite()) {
                return Err(invalid("v entries must be finite"));
            }
        }
        for (name, &tol) in &self.tolerances {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(invalid(format!("tolerance {name} must be > 0")));
            }
            if !crate::suite::is_known_check(name) {
                return Err(invalid(format!("tolerances: unknown check {name:?}")));
            }
        }
        let s = &self.sweep;
        if s.lambdas.is_empty() || s.lambdas[0] == 0 || s.lambdas.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("sweep.lambdas must be positive and strictly increasing"));
        }
        if s.betas.is_empty()
            || s.betas.iter().any(|b| !(*b > 0.0) || !b.is_finite())
            || s.betas.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(invalid("sweep.betas must be positive and strictly increasing"));
        }
        let g = s.t_grid;
        if g.points == 0 || !g.start.is_finite() || !g.stop.is_finite() || !(g.stop >= g.start) {
            return Err(invalid("sweep.t_grid needs points >= 1 and start <= stop"));
        }
        Ok(())
    }

    pub fn modes(&self) -> Result<Modes, LabError> {
        Ok(Modes::new(self.omega.clone(), self.mu)?)
    }

    pub fn source(&self) -> Result<Src, LabError> {
        Ok(match &self.v {
            Some(v) => Src::from_real(v)?,
            None => Src::zero(self.m),
        })
    }

    pub fn family(&self) -> CutoffFamily<f64> {
        CutoffFamily::new(self.sweep.profile, self.mu)
    }

    /// Seed for randomized checks.
    pub fn require_seed(&self) -> Result<u64, LabError> {
        self.seed
            .ok_or_else(|| invalid("seed is required when randomized checks are enabled"))
    }
}
