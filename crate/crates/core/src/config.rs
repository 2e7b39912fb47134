//! CLI configuration: defaults, the key=value config-file format, and the
//! environment variable pointing at a config file.

use crate::render::OutputFormat;
use std::path::{Path, PathBuf};
use thiserror::Error;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "DIRACSEA_CONFIG";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliConfig {
    pub default_order_pk: u32,
    pub default_order_b: u32,
    pub output_format: OutputFormat,
    /// Golden file to verify against; the embedded tables when unset.
    pub golden_path: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            default_order_pk: 6,
            default_order_b: 3,
            output_format: OutputFormat::Text,
            golden_path: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("failed to read config {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected key=value, found {text:?}")]
    Syntax {
        path: String,
        line: usize,
        text: String,
    },
    #[error("{path}:{line}: unknown key {key:?}")]
    UnknownKey {
        path: String,
        line: usize,
        key: String,
    },
    #[error("{path}:{line}: bad value {value:?} for {key}: {reason}")]
    BadValue {
        path: String,
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
}

impl CliConfig {
    /// Parses a key=value config file ("#" comments and blank lines are
    /// ignored). Unknown keys are rejected.
    pub fn load(path: &Path) -> Result<CliConfig, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config = CliConfig::default();
        let path_str = path.display().to_string();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    path: path_str.clone(),
                    line: line_no,
                    text: line.to_string(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let bad = |reason: String| ConfigError::BadValue {
                path: path_str.clone(),
                line: line_no,
                key: key.to_string(),
                value: value.to_string(),
                reason,
            };
            match key {
                "default_order_pk" => {
                    config.default_order_pk = value.parse().map_err(|e| bad(format!("{e}")))?;
                }
                "default_order_b" => {
                    config.default_order_b = value.parse().map_err(|e| bad(format!("{e}")))?;
                }
                "output_format" => {
                    config.output_format = value.parse().map_err(|e| bad(format!("{e}")))?;
                }
                "golden_path" => {
                    config.golden_path = Some(PathBuf::from(value));
                }
                _ => {
                    return Err(ConfigError::UnknownKey {
                        path: path_str.clone(),
                        line: line_no,
                        key: key.to_string(),
                    });
                }
            }
        }
        Ok(config)
    }

    /// The effective startup config: the file named by the environment
    /// variable when set, built-in defaults otherwise.
    pub fn from_env() -> Result<CliConfig, ConfigError> {
        match std::env::var_os(CONFIG_ENV) {
            Some(path) => CliConfig::load(Path::new(&path)),
            None => Ok(CliConfig::default()),
        }
    }
}
