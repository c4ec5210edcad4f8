//! Default run settings read from a TOML file.
//!
//! The file named by `FPP_CONFIG` may set any of:
//!
//! ```toml
//! lambda_tolerance = 1e-9
//! epsilon_w = 1e-6
//! max_expansions = 60
//! max_iterations = 200
//! spread = 1.0
//! floor = 0.1111
//! renormalize = false
//! format = "table"
//! parallel = false
//! ```
//!
//! Command-line flags override these values.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::judgments::SpreadPolicy;
use crate::report::{Format, RunOptions};
use crate::solver::SolverConfig;

pub const CONFIG_ENV: &str = "FPP_CONFIG";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("reading {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parsing {path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub lambda_tolerance: Option<f64>,
    pub epsilon_w: Option<f64>,
    pub max_expansions: Option<usize>,
    pub max_iterations: Option<usize>,
    pub spread: Option<f64>,
    pub floor: Option<f64>,
    pub renormalize: Option<bool>,
    pub format: Option<String>,
    pub parallel: Option<bool>,
}

impl Settings {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text, path)
    }

    /// Settings from the file named by `FPP_CONFIG`, or empty when unset.
    pub fn from_env() -> Result<Self, ConfigError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(p) if !p.is_empty() => Self::from_file(Path::new(&p)),
            _ => Ok(Self::default()),
        }
    }

    /// Values set in `other` win.
    pub fn merge(self, other: Settings) -> Settings {
        Settings {
            lambda_tolerance: other.lambda_tolerance.or(self.lambda_tolerance),
            epsilon_w: other.epsilon_w.or(self.epsilon_w),
            max_expansions: other.max_expansions.or(self.max_expansions),
            max_iterations: other.max_iterations.or(self.max_iterations),
            spread: other.spread.or(self.spread),
            floor: other.floor.or(self.floor),
            renormalize: other.renormalize.or(self.renormalize),
            format: other.format.or(self.format),
            parallel: other.parallel.or(self.parallel),
        }
    }

    pub fn solver_config(&self) -> SolverConfig {
        let d = SolverConfig::default();
        SolverConfig {
            lambda_tolerance: self.lambda_tolerance.unwrap_or(d.lambda_tolerance),
            epsilon_w: self.epsilon_w.unwrap_or(d.epsilon_w),
            max_expansions: self.max_expansions.unwrap_or(d.max_expansions),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
        }
    }

    /// Spread policy override on top of `base`, if spread or floor is set.
    pub fn policy_over(&self, base: SpreadPolicy) -> Result<Option<SpreadPolicy>, ConfigError> {
        if self.spread.is_none() && self.floor.is_none() {
            return Ok(None);
        }
        SpreadPolicy::new(
            self.spread.unwrap_or(base.spread()),
            self.floor.unwrap_or(base.floor()),
        )
        .map(Some)
        .map_err(ConfigError::Invalid)
    }

    pub fn format(&self) -> Result<Format, ConfigError> {
        self.format.as_deref().map_or(Ok(Format::Table), |f| {
            f.parse().map_err(ConfigError::Invalid)
        })
    }

    pub fn run_options(
        &self,
        base_policy: SpreadPolicy,
        oracle_check: bool,
    ) -> Result<RunOptions, ConfigError> {
        Ok(RunOptions {
            config: self.solver_config(),
            policy: self.policy_over(base_policy)?,
            renormalize: self.renormalize.unwrap_or(false),
            oracle_check,
            parallel: self.parallel.unwrap_or(false),
        })
    }
}
