use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::SchemeConfig;
use crate::model::{Domain, Grid1D, Grid2D, Parameters, SourceSpec};

/// One experiment: a domain, a refinement sweep and what to write.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub domain: Domain,
    pub grid: GridSpec,
    #[serde(default)]
    pub parameters: Parameters,
    pub source: SourceSpec,
    #[serde(default)]
    pub scheme: SchemeConfig,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    /// Strictly decreasing spacings, one table row each.
    pub h: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub directory: PathBuf,
    /// Nodal `u` and `v` of every solution computed.
    pub profiles: bool,
    /// Pointwise error profiles.
    pub errors: bool,
    /// `table.csv` and `runs.csv`.
    pub table: bool,
    /// Write the standing layer every this many steps of each evolution; 0 disables.
    pub snapshot_every: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        OutputSpec {
            directory: PathBuf::from("out"),
            profiles: false,
            errors: false,
            table: true,
            snapshot_every: 0,
        }
    }
}

impl OutputSpec {
    pub fn any(&self) -> bool {
        self.profiles || self.errors || self.table || self.snapshot_every > 0
    }
}

/// Lattice of one sweep row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowGrid {
    Line(Grid1D),
    Plane(Grid2D),
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.h.is_empty() {
            return Err(Error::Config("grid.h is empty".into()));
        }
        if self.grid.h.windows(2).any(|w| !(w[1] < w[0])) {
            return Err(Error::Config(format!(
                "grid.h must be strictly decreasing, got {:?}",
                self.grid.h
            )));
        }
        for &h in &self.grid.h {
            self.grid_for(h)?;
        }
        if !self.output.any() {
            return Err(Error::Config("no output requested".into()));
        }
        self.parameters.validate()?;
        self.scheme.validate()?;
        self.source.validate(&self.domain)?;
        if self.source.total_mass() <= 0.0 {
            return Err(Error::ZeroMass);
        }
        Ok(())
    }

    pub fn grid_for(&self, h: f64) -> Result<RowGrid> {
        Ok(match self.domain {
            Domain::Interval { length } => RowGrid::Line(Grid1D::with_spacing(length, h)?),
            Domain::Rectangle { lx, ly } => RowGrid::Plane(Grid2D::with_spacing(lx, ly, h)?),
        })
    }

    pub fn with_h_list(mut self, h: Vec<f64>) -> Result<Self> {
        self.grid.h = h;
        self.validate()?;
        Ok(self)
    }

    pub fn with_max_steps(mut self, max_steps: usize) -> Result<Self> {
        self.scheme.max_steps = max_steps;
        self.validate()?;
        Ok(self)
    }

    pub fn with_directory(mut self, dir: impl Into<PathBuf>) -> Self {
        self.output.directory = dir.into();
        self
    }
}

/// Parse a comma-separated spacing list such as `0.01,0.005,1/128`.
pub fn parse_h_list(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let bad = || Error::Config(format!("bad spacing {s:?}"));
            match s.split_once('/') {
                Some((a, b)) => {
                    let a: f64 = a.trim().parse().map_err(|_| bad())?;
                    let b: f64 = b.trim().parse().map_err(|_| bad())?;
                    Ok(a / b)
                }
                None => s.parse().map_err(|_| bad()),
            }
        })
        .collect()
}
