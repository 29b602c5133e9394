//! Settings shared by the CLI and the server, read from `--config FILE`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crux_core::generator::GenerationConfig;
use crux_core::grading::{GradingSettings, DEFAULT_LOCK_THRESHOLD};
use crux_core::sim::PopulationSpec;
use crux_core::ClimberProfile;

use crate::error::{EngineError, Kind};

pub const DEFAULT_PORT: u16 = 8977;
pub const CORPUS_ENV: &str = "CRUX_CORPUS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PopulationSettings {
    #[serde(flatten)]
    pub spec: PopulationSpec,
    pub seed: u64,
}

impl Default for PopulationSettings {
    fn default() -> Self {
        PopulationSettings { spec: PopulationSpec::default(), seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// Climbers sampled for Monte-Carlo grading.
    pub population: PopulationSettings,
    pub grading: GradingSettings,
    /// Climber whose beta `beta`, `vary` and `simulate` report.
    pub climber: ClimberProfile,
    pub lock_threshold: u32,
    /// Defaults for generation runs; requests override field by field.
    pub generation: GenerationConfig,
    pub max_jobs: usize,
    pub port: u16,
    pub corpus: Option<PathBuf>,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            population: PopulationSettings::default(),
            grading: GradingSettings::default(),
            climber: ClimberProfile::default(),
            lock_threshold: DEFAULT_LOCK_THRESHOLD,
            generation: GenerationConfig::default(),
            max_jobs: 2,
            port: DEFAULT_PORT,
            corpus: None,
        }
    }
}

impl Settings {
    pub fn load(path: Option<&Path>) -> Result<Settings, EngineError> {
        let Some(path) = path else { return Ok(Settings::default()) };
        let text = std::fs::read_to_string(path)
            .map_err(|e| EngineError::new(Kind::Invalid, "CONFIG", format!("{}: {e}", path.display())))?;
        let mut de = serde_json::Deserializer::from_str(&text);
        serde_path_to_error::deserialize(&mut de)
            .map_err(|e| EngineError::new(Kind::Invalid, "CONFIG", format!("{}: {}: {}", path.display(), e.path(), e.inner())))
    }

    /// Corpus directory: the explicit flag, then `CRUX_CORPUS`, then the
    /// config file, then `./corpus`.
    pub fn corpus_path(&self, flag: Option<&Path>) -> PathBuf {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CORPUS_ENV).map(PathBuf::from))
            .or_else(|| self.corpus.clone())
            .unwrap_or_else(|| PathBuf::from("corpus"))
    }
}
