//! Experiment definitions.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use chpeed_core::moea::{EngineConfig, ObjectiveMode};
use chpeed_core::system::bundled;
use chpeed_core::{ConstraintConfig, SystemDefinition};
use serde::{Deserialize, Serialize};

/// Overrides the output root of every experiment when set.
pub const OUTPUT_ROOT_ENV: &str = "CHPEED_OUTPUT_ROOT";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Cost only.
    Chped,
    /// Cost and emission.
    Chpeed,
}

impl Mode {
    pub fn objectives(self) -> ObjectiveMode {
        match self {
            Mode::Chped => ObjectiveMode::CostOnly,
            Mode::Chpeed => ObjectiveMode::CostEmission,
        }
    }
}

fn default_levels() -> Vec<f64> {
    vec![25.0, 50.0, 75.0]
}

fn default_alpha() -> f64 {
    0.05
}

fn default_output() -> PathBuf {
    PathBuf::from("runs")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Name of the experiment directory under the output root.
    pub id: String,
    /// A bundled system name (`system1`..`system3`) or a path to a system
    /// file, relative paths being taken from the config file's directory.
    pub system: String,
    pub mode: Mode,
    pub repetitions: usize,
    #[serde(default)]
    pub seed_base: u64,
    #[serde(default = "default_output")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub constraint: ConstraintConfig,
    /// Engines to run. `objectives` and `rng_seed` are set by the harness.
    pub algorithms: Vec<EngineConfig>,
    #[serde(default = "default_levels")]
    pub eaf_levels: Vec<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<(ExperimentConfig, PathBuf)> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading experiment file {}", path.display()))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing experiment file {}", path.display()))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    pub fn validate(&self) -> Result<()> {
        if self.id.is_empty() || self.id.contains(['/', '\\']) || self.id.starts_with('.') {
            bail!("experiment id {:?} is not a plain directory name", self.id);
        }
        if self.repetitions == 0 {
            bail!("repetitions must be at least 1");
        }
        if self.algorithms.is_empty() {
            bail!("no algorithms listed");
        }
        let mut tags: Vec<&str> = self.algorithms.iter().map(|a| a.algorithm.tag()).collect();
        tags.sort_unstable();
        if tags.windows(2).any(|w| w[0] == w[1]) {
            bail!("each algorithm may be listed once");
        }
        for a in &self.algorithms {
            a.validate()
                .with_context(|| format!("engine settings for {}", a.algorithm))?;
        }
        if let Some(k) = self.eaf_levels.iter().find(|&&k| !(k > 0.0 && k <= 100.0)) {
            bail!("attainment level {k} outside (0, 100]");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            bail!("alpha must lie in (0, 1)");
        }
        Ok(())
    }

    /// Raw text of the system file.
    pub fn system_source(&self, base: &Path) -> Result<String> {
        if bundled::by_name(&self.system).is_some() {
            return Ok(match self.system.as_str() {
                "system1" => bundled::SYSTEM1_JSON,
                "system2" => bundled::SYSTEM2_JSON,
                _ => bundled::SYSTEM3_JSON,
            }
            .to_string());
        }
        let path = base.join(&self.system);
        fs::read_to_string(&path).with_context(|| format!("reading system file {}", path.display()))
    }

    /// Engine settings for one repetition.
    pub fn engine(&self, index: usize, repetition: usize) -> EngineConfig {
        EngineConfig {
            objectives: self.mode.objectives(),
            rng_seed: self.seed(repetition),
            ..self.algorithms[index].clone()
        }
    }

    pub fn seed(&self, repetition: usize) -> u64 {
        self.seed_base + repetition as u64
    }

    /// `$CHPEED_OUTPUT_ROOT` when set, else `output_dir`.
    pub fn output_root(&self) -> PathBuf {
        std::env::var_os(OUTPUT_ROOT_ENV)
            .map(PathBuf::from)
            .unwrap_or_else(|| self.output_dir.clone())
    }
}

pub fn parse_system(text: &str) -> Result<SystemDefinition> {
    Ok(SystemDefinition::from_json_str(text)?)
}

pub fn check_constraint(cfg: &ConstraintConfig, sys: &SystemDefinition) -> Result<()> {
    cfg.validate(sys).context("constraint settings")?;
    Ok(())
}
