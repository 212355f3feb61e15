use std::path::Path;

use serde::Deserialize;

use crate::error::CliError;

pub const BUDGET_ENV: &str = "TIGHTWALK_BUDGET_NODES";

/// Values read from `--config`. Every field is optional; a flag given on the
/// command line wins over the file, and the file wins over built-in defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub node_budget: Option<u64>,
    pub method: Option<String>,
    pub kappa: Option<usize>,
    pub samples: Option<u64>,
    pub theta: Option<f64>,
    pub retries: Option<usize>,
    pub gamma: Option<f64>,
    pub strict_mode: Option<bool>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        let Some(path) = path else {
            return Ok(FileConfig::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: FileConfig = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
        if cfg.node_budget == Some(0) {
            return Err(CliError::Usage("budgets must be positive".into()));
        }
        Ok(cfg)
    }

    /// Node budget: flag, then the environment, then the file, then `default`.
    pub fn node_budget(&self, flag: Option<u64>, default: u64) -> Result<u64, CliError> {
        let env = match std::env::var(BUDGET_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<u64>()
                    .ok()
                    .filter(|&b| b > 0)
                    .ok_or_else(|| CliError::Usage(format!("{BUDGET_ENV} must be a positive integer")))?,
            ),
            Err(_) => None,
        };
        let budget = flag.or(env).or(self.node_budget).unwrap_or(default);
        if budget == 0 {
            return Err(CliError::Usage("budgets must be positive".into()));
        }
        Ok(budget)
    }
}

/// The flag if present, else the file value, else the default.
pub fn pick<T>(flag: Option<T>, file: Option<T>, default: T) -> T {
    flag.or(file).unwrap_or(default)
}
