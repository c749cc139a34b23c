use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::config::ExperimentConfig;
use crate::error::LabError;

/// Direction of the comparison between `measured` and `tolerance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `measured < tolerance`.
    Below,
    /// `measured > tolerance`; used by negative controls.
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Record {
    pub name: String,
    /// The identity being verified, written out.
    pub paper_anchor: String,
    pub parameters: BTreeMap<String, Value>,
    /// `None` when the check could not be evaluated.
    pub measured: Option<f64>,
    pub tolerance: f64,
    pub relation: Relation,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Record {
    pub fn new(name: &str, anchor: &str, measured: f64, tolerance: f64, relation: Relation) -> Self {
        let pass = match relation {
            Relation::Below => measured < tolerance,
            Relation::Above => measured > tolerance,
        };
        Self {
            name: name.to_string(),
            paper_anchor: anchor.to_string(),
            parameters: BTreeMap::new(),
            measured: measured.is_finite().then_some(measured),
            tolerance,
            relation,
            pass,
            truncation_estimate: None,
            note: None,
        }
    }

    pub fn failed(name: &str, anchor: &str, tolerance: f64, relation: Relation, error: String) -> Self {
        Self {
            name: name.to_string(),
            paper_anchor: anchor.to_string(),
            parameters: BTreeMap::new(),
            measured: None,
            tolerance,
            relation,
            pass: false,
            truncation_estimate: None,
            note: Some(error),
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.parameters.insert(key.to_string(), value.into());
        self
    }

    pub fn truncation(mut self, estimate: f64) -> Self {
        self.truncation_estimate = Some(estimate);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

/// Build identification. Contains nothing time- or host-dependent so that
/// reports are reproducible byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Environment {
    pub tool: &'static str,
    pub version: &'static str,
    pub scalar: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            scalar: "f64",
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<R> {
    pub command: String,
    pub environment: Environment,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub tolerance_scale: f64,
    pub config: ExperimentConfig,
    pub all_pass: bool,
    pub records: Vec<R>,
}

pub trait Outcome {
    fn key(&self) -> &str;
    fn passed(&self) -> bool;
}

impl Outcome for Record {
    fn key(&self) -> &str {
        &self.name
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

impl Outcome for vhm_core::kms::KmsRecord {
    fn key(&self) -> &str {
        &self.check
    }

    fn passed(&self) -> bool {
        self.pass
    }
}

impl<R: Outcome + Serialize> Report<R> {
    /// Sorts records by name so the output does not depend on evaluation order.
    pub fn new(
        command: &str,
        config: &ExperimentConfig,
        seed: Option<u64>,
        tolerance_scale: f64,
        mut records: Vec<R>,
    ) -> Self {
        records.sort_by(|a, b| a.key().cmp(b.key()));
        Self {
            command: command.to_string(),
            environment: Environment::current(),
            seed,
            tolerance_scale,
            config: config.clone(),
            all_pass: records.iter().all(Outcome::passed),
            records,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &R> {
        self.records.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> Result<String, LabError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn write(&self, path: &Path) -> Result<(), LabError> {
        write_file(path, &self.to_json()?)
    }
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), LabError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| LabError::Io {
            path: dir.to_path_buf(),
            source: e,
        })?;
    }
    std::fs::write(path, contents).map_err(|e| LabError::Io {
        path: path.to_path_buf(),
        source: e,
    })
}
