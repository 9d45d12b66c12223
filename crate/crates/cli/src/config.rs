//! Experiment configuration files.
//!
//! A config is a JSON document with a single top-level `experiment`
//! object. Problem and method blocks are `{ "name": ..., "params": ... }`
//! pairs resolved against the catalogs in [`crate::catalog`]. Every
//! configuration error carries a `file:line:column` location.

use std::path::{Path, PathBuf};

use convlab_core::{Mode, StageGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, Location};

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub experiment: ExperimentConfig,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: NamedBlock,
    pub method: NamedBlock,
    pub mode: ModeBlock,
    #[serde(default)]
    pub engine: EngineBlock,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output: OutputBlock,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct NamedBlock {
    pub name: String,
    #[serde(default)]
    pub params: serde_json::Value,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ModeBlock {
    pub mode: Mode,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub horizon: u64,
    #[serde(default)]
    pub stages: StageGrid,
    pub worlds: Option<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct EngineBlock {
    #[serde(default = "default_exact_cap")]
    pub exact_cap: u64,
    #[serde(default = "default_symmetric_cap")]
    pub symmetric_cap: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
}

fn default_exact_cap() -> u64 {
    convlab_core::Budget::default().enumeration_cap
}

fn default_symmetric_cap() -> u64 {
    convlab_core::Budget::default().symmetric_cap
}

fn default_trials() -> u64 {
    convlab_core::Budget::default().trials
}

impl Default for EngineBlock {
    fn default() -> Self {
        Self {
            exact_cap: default_exact_cap(),
            symmetric_cap: default_symmetric_cap(),
            trials: default_trials(),
        }
    }
}

impl EngineBlock {
    pub fn budget(&self) -> convlab_core::Budget {
        convlab_core::Budget {
            enumeration_cap: self.exact_cap,
            symmetric_cap: self.symmetric_cap,
            rational_cap: convlab_core::Budget::default().rational_cap.min(self.symmetric_cap),
            trials: self.trials,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct OutputBlock {
    pub curve: Option<PathBuf>,
    pub record: Option<PathBuf>,
}

/// A parsed config together with the bytes it came from, for digests
/// and diagnostics.
#[derive(Debug, Clone)]
pub struct LoadedConfig {
    pub path: PathBuf,
    pub text: String,
    pub experiment: ExperimentConfig,
}

impl LoadedConfig {
    pub fn parse(path: impl Into<PathBuf>, text: String) -> CliResult<Self> {
        let path = path.into();
        let file: ConfigFile = serde_json::from_str(&text).map_err(|e| CliError::Config {
            location: Location {
                path: path.clone(),
                line: e.line(),
                column: e.column(),
            },
            message: e.to_string(),
        })?;
        Ok(Self {
            path,
            text,
            experiment: file.experiment,
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(path, text)
    }

    /// A configuration error pointed at the first line mentioning `key`
    /// (a JSON key or string value), or the top of the file.
    pub fn error_at(&self, key: &str, message: impl Into<String>) -> CliError {
        let quoted = format!("\"{key}\"");
        let (line, column) = self
            .text
            .lines()
            .enumerate()
            .find_map(|(i, l)| l.find(&quoted).map(|c| (i + 1, c + 1)))
            .unwrap_or((1, 1));
        CliError::Config {
            location: Location {
                path: self.path.clone(),
                line,
                column,
            },
            message: message.into(),
        }
    }

    pub fn digest(&self) -> String {
        sha256_hex(self.text.as_bytes())
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    hex::encode(Sha256::digest(bytes))
}
