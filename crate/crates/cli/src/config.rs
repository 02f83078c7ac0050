use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

/// Defaults read from `--config`; every field mirrors a flag of the same name.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub g: Option<i64>,
    pub depth: Option<usize>,
    pub budget: Option<usize>,
    pub reading: Option<String>,
    pub max_steps: Option<usize>,
    pub samples: Option<usize>,
    pub bound: Option<u64>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::input(format!("invalid config {}: {e}", path.display())))
    }
}
