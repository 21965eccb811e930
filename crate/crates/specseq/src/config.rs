//! Run configuration, read from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Truncation depth `N` of the μ-adic entries.
    pub mu_depth: usize,
    /// Depth `K` of the coefficient ring in the unit computations.
    pub mixed_depth: usize,
    /// Extra depth `Δ` used to stabilize truncated answers.
    pub delta: usize,
    pub window: WindowConfig,
    /// Fixture directory; the built-in copies are used when unset.
    pub fixtures: Option<PathBuf>,
    pub output: PathBuf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WindowConfig {
    pub s_max: usize,
    pub t_min: i64,
    pub t_max: i64,
}

impl Default for WindowConfig {
    fn default() -> Self {
        WindowConfig { s_max: 16, t_min: 0, t_max: 48 }
    }
}

impl Default for Config {
    fn default() -> Self {
        Config {
            mu_depth: 6,
            mixed_depth: 8,
            delta: 2,
            window: WindowConfig::default(),
            fixtures: None,
            output: PathBuf::from("out"),
        }
    }
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let c: Config = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Config, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Config::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let mut bad = Vec::new();
        if self.mu_depth < 3 {
            bad.push(format!("mu_depth must be at least 3, got {}", self.mu_depth));
        }
        if self.mixed_depth < 4 {
            bad.push(format!("mixed_depth must be at least 4, got {}", self.mixed_depth));
        }
        if self.delta < 1 {
            bad.push("delta must be at least 1".to_string());
        }
        let w = &self.window;
        if w.t_max - w.t_min < 32 {
            bad.push(format!("window [{}, {}) must cover a full period of 32", w.t_min, w.t_max));
        }
        if w.s_max < 8 {
            bad.push(format!("window s_max must be at least 8, got {}", w.s_max));
        }
        if bad.is_empty() {
            Ok(())
        } else {
            Err(ConfigError(bad.join("; ")))
        }
    }

    /// SHA-256 of the settings that affect results. The output directory
    /// is left out so moving a run does not change its reports.
    pub fn hash(&self) -> String {
        let key = serde_json::json!({
            "mu_depth": self.mu_depth,
            "mixed_depth": self.mixed_depth,
            "delta": self.delta,
            "window": self.window,
            "fixtures": self.fixtures,
        });
        let digest = Sha256::digest(key.to_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_from_empty_file() {
        let c = Config::parse("").unwrap();
        assert_eq!(c, Config::default());
        assert_eq!((c.mu_depth, c.mixed_depth, c.delta, c.window.s_max), (6, 8, 2, 16));
    }

    #[test]
    fn small_depth_rejected() {
        let e = Config::parse("mu_depth = 1").unwrap_err();
        assert!(e.0.contains("mu_depth"));
        assert!(Config::parse("mixed_depth = 3").is_err());
        assert!(Config::parse("delta = 0").is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(Config::parse("depth = 6").is_err());
    }

    #[test]
    fn hash_ignores_output() {
        let a = Config::default();
        let b = Config { output: PathBuf::from("elsewhere"), ..Config::default() };
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), Config { mu_depth: 7, ..a.clone() }.hash());
    }
}
