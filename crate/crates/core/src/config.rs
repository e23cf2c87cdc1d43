//! Experiment configuration files (TOML).
//!
//! ```toml
//! shapes = ["cb", "hp", "rd", "to"]
//! r_t = 1.0
//! sink = [0.0, 0.0, 0.0]
//!
//! [deployment]
//! box_min = [0.0, 0.0, 0.0]
//! box_max = [2.0, 2.0, 2.0]
//! node_count = 100000
//!
//! [lifetime]
//! battery_capacity = 1.0
//! k = 1
//! runs = 10
//!
//! [accuracy]
//! n = 100000
//! ```
//!
//! Every key is optional except where a command needs it; defaults are
//! listed on the structs.

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geometry::{Aabb, CellShape, Point3};
use crate::lattice::LatticeSpec;
use crate::simulator::DeploymentConfig;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Shapes to run, by code (`cb`, `hp`, `rd`, `to`). Default: all four.
    #[serde(default)]
    pub shapes: Option<Vec<String>>,
    /// Transmission range in meters. Default 1.
    #[serde(default)]
    pub r_t: Option<f64>,
    /// Sink location. Default origin.
    #[serde(default)]
    pub sink: Option<[f64; 3]>,
    #[serde(default)]
    pub deployment: Option<DeploymentSection>,
    #[serde(default)]
    pub lifetime: LifetimeSection,
    #[serde(default)]
    pub accuracy: AccuracySection,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeploymentSection {
    pub box_min: [f64; 3],
    pub box_max: [f64; 3],
    pub node_count: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LifetimeSection {
    #[serde(default = "one")]
    pub battery_capacity: f64,
    #[serde(default = "one_usize")]
    pub k: usize,
    /// Independent seeds per shape, `seed, seed+1, …`.
    #[serde(default = "one_usize")]
    pub runs: usize,
}

impl Default for LifetimeSection {
    fn default() -> Self {
        Self {
            battery_capacity: 1.0,
            k: 1,
            runs: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AccuracySection {
    #[serde(default = "default_n")]
    pub n: usize,
}

impl Default for AccuracySection {
    fn default() -> Self {
        Self { n: default_n() }
    }
}

fn one() -> f64 {
    1.0
}

fn one_usize() -> usize {
    1
}

fn default_n() -> usize {
    100_000
}

fn point(c: [f64; 3]) -> Result<Point3> {
    Point3::try_new(c[0], c[1], c[2])
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?;
        Self::from_toml_str(&text)
    }

    pub fn shapes(&self) -> Result<Vec<CellShape>> {
        match &self.shapes {
            None => Ok(CellShape::ALL.to_vec()),
            Some(list) => list.iter().map(|s| s.parse()).collect(),
        }
    }

    pub fn transmission_range(&self) -> f64 {
        self.r_t.unwrap_or(1.0)
    }

    pub fn sink(&self) -> Result<Point3> {
        self.sink.map(point).unwrap_or(Ok(Point3::ZERO))
    }

    pub fn lattice(&self, shape: CellShape) -> Result<LatticeSpec> {
        LatticeSpec::new(shape, self.transmission_range(), self.sink()?)
    }

    pub fn deployment(&self, seed: u64) -> Result<DeploymentConfig> {
        let d = self
            .deployment
            .as_ref()
            .ok_or_else(|| Error::Config("missing [deployment] section".into()))?;
        let region = Aabb::new(point(d.box_min)?, point(d.box_max)?)?;
        DeploymentConfig::new(region, d.node_count, seed)
    }
}
