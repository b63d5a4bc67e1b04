use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::read_text;
use crate::envelope::{apply_failure, FailureSpec, GridSpec};
use crate::model::AircraftParams;
use crate::trim::SolverConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunFlags {
    /// Derive the mirror image of each lateral failure from its computed
    /// envelope and spot-check it against direct solves.
    pub mirror: bool,
    pub validation_samples: usize,
    /// Seed for the validation sample.
    pub seed: u64,
    /// Worker thread bound; `None` uses all cores.
    pub threads: Option<usize>,
}

impl Default for RunFlags {
    fn default() -> Self {
        RunFlags {
            mirror: false,
            validation_samples: 20,
            seed: 0,
            threads: None,
        }
    }
}

fn yes() -> bool {
    true
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Envelope run description (JSON).
///
/// Relative paths are taken relative to the manifest's directory when the
/// manifest is loaded from a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    /// Parameter file; the shipped defaults when absent.
    #[serde(default)]
    pub params: Option<PathBuf>,
    pub grid: GridSpec,
    #[serde(default)]
    pub failures: Vec<FailureSpec>,
    /// Also sweep the unimpaired aircraft, the reference for separation
    /// reports.
    #[serde(default = "yes")]
    pub include_unimpaired: bool,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub flags: RunFlags,
}

impl RunManifest {
    pub fn new(grid: GridSpec) -> Self {
        RunManifest {
            params: None,
            grid,
            failures: Vec::new(),
            include_unimpaired: true,
            solver: SolverConfig::default(),
            output_dir: default_output_dir(),
            flags: RunFlags::default(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let mut m = Self::from_json_str(&read_text(path)?).map_err(|e| match e {
            Error::Json(j) => Error::format(path, j.to_string()),
            other => other,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        if let Some(p) = &m.params {
            if p.is_relative() {
                m.params = Some(base.join(p));
            }
        }
        if m.output_dir.is_relative() {
            m.output_dir = base.join(&m.output_dir);
        }
        m.validate()?;
        Ok(m)
    }

    pub fn load_params(&self) -> Result<AircraftParams> {
        match &self.params {
            Some(p) => AircraftParams::load(p),
            None => Ok(AircraftParams::default()),
        }
    }

    /// Checks everything that can be checked without sweeping, including
    /// that the parameter file exists and validates.
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        self.solver.validate()?;
        let params = self.load_params()?;
        for f in &self.failures {
            apply_failure(&params.limits, Some(f))?;
        }
        if self.failures.is_empty() && !self.include_unimpaired {
            return Err(Error::Validation("manifest selects no cases".into()));
        }
        if self.flags.threads == Some(0) {
            return Err(Error::Validation("threads must be at least 1".into()));
        }
        Ok(())
    }

    /// Cases in run order: unimpaired first when included.
    pub fn cases(&self) -> Vec<Option<FailureSpec>> {
        let mut out = Vec::new();
        if self.include_unimpaired {
            out.push(None);
        }
        out.extend(self.failures.iter().copied().map(Some));
        out
    }
}
