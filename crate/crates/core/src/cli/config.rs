//! TOML configuration shared by all commands. Every section is optional
//! and defaults to the standard parameter set.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::scenarios::GeneratorConfig;
use crate::stitcher::{Schedule, StitchParams};
use crate::tracker::TrackerConfig;

/// One `(λ₀, α)` cell of a sweep; without `alpha` the weight stays at `λ₀`
/// for every waypoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepCell {
    pub lambda0: f64,
    #[serde(default)]
    pub alpha: Option<f64>,
}

impl SweepCell {
    pub fn label(&self) -> String {
        match self.alpha {
            Some(a) => format!("({}, {})", self.lambda0, a),
            None => format!("({}, -)", self.lambda0),
        }
    }

    /// `base` with this cell's weight, threshold and schedule.
    pub fn apply(&self, base: &StitchParams) -> StitchParams {
        StitchParams {
            lambda0: self.lambda0,
            alpha: self.alpha.unwrap_or(base.alpha),
            schedule: if self.alpha.is_some() {
                Schedule::Adaptive
            } else {
                Schedule::Constant
            },
            ..*base
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub cells: Vec<SweepCell>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let cell = |lambda0, alpha| SweepCell { lambda0, alpha };
        Self {
            cells: vec![
                cell(0.55, Some(0.5)),
                cell(10.0, Some(0.8)),
                cell(0.01, Some(0.2)),
                cell(0.55, None),
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub methods: Vec<String>,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            methods: ["ballistic", "pp", "raw", "ls1", "ls3", "ls5", "us"]
                .map(String::from)
                .to_vec(),
            parallel: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub generator: GeneratorConfig,
    pub stitch: StitchParams,
    pub tracker: TrackerConfig,
    pub run: RunConfig,
    pub sweep: SweepConfig,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigFileError {
    #[error("cannot read config {path}: {source}")]
    Read {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("bad config {path}: {source}")]
    Parse {
        path: String,
        #[source]
        source: toml::de::Error,
    },
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigFileError::Read {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text).map_err(|source| ConfigFileError::Parse {
            path: path.display().to_string(),
            source,
        })
    }

    /// The file at `path`, or the defaults.
    pub fn load_or_default(path: Option<&Path>) -> Result<Self, ConfigFileError> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_default() {
        assert_eq!(Config::from_toml("").unwrap(), Config::default());
    }

    #[test]
    fn sections_override() {
        let cfg = Config::from_toml(
            r#"
            [generator]
            seed = 3
            [generator.counts]
            straight = 2
            [stitch]
            lambda0 = 1.5
            target_length = { points = 120 }
            [sweep]
            cells = [{ lambda0 = 0.55, alpha = 0.5 }, { lambda0 = 0.55 }]
            "#,
        )
        .unwrap();
        assert_eq!(cfg.generator.seed, 3);
        assert_eq!(cfg.generator.counts.straight, 2);
        assert_eq!(cfg.generator.counts.left_turn, 60);
        assert_eq!(cfg.stitch.lambda0, 1.5);
        assert_eq!(cfg.stitch.alpha, 0.5);
        assert_eq!(cfg.sweep.cells[1].alpha, None);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(Config::from_toml("[stitch]\nlambda = 1.0\n").is_err());
        assert!(Config::from_toml("[nonsense]\n").is_err());
    }

    #[test]
    fn constant_cell() {
        let p = SweepCell {
            lambda0: 0.55,
            alpha: None,
        }
        .apply(&StitchParams::default());
        assert_eq!(p.schedule, Schedule::Constant);
        assert_eq!(p.lambda0, 0.55);
    }
}
