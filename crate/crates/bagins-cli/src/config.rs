//! Run configuration: one JSON document whose fields mirror the
//! individualization and study config structs; command-line flags override
//! file values.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use bagins::individualize::{IndividualizationConfig, Objective, TieBreak};
use bagins::scale::ScaleAssignment;
use bagins::study::{StudyConfig, WeightModel};

use crate::CliError;

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    // Individualization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<Objective>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_schedule: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_gap: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_passes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tie_break: Option<TieBreak>,
    // Study generation.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrices: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub true_scale: Option<ScaleAssignment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub perturb_prob: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight_model: Option<WeightModel>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A config file plus where it came from (for the manifest).
pub struct ResolvedConfig {
    pub file: ConfigFile,
    pub source: String,
}

impl ResolvedConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(ResolvedConfig {
                file: ConfigFile::default(),
                source: "defaults".to_string(),
            }),
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::input(format!("cannot read config {}: {e}", path.display()))
                })?;
                let file: ConfigFile = serde_json::from_str(&text)
                    .map_err(|e| CliError::input(format!("config {}: {e}", path.display())))?;
                Ok(ResolvedConfig {
                    file,
                    source: path.display().to_string(),
                })
            }
        }
    }

    pub fn individualization(&self) -> Result<IndividualizationConfig, CliError> {
        let defaults = IndividualizationConfig::default();
        let cfg = IndividualizationConfig {
            objective: self.file.objective.unwrap_or(defaults.objective),
            step_schedule: self
                .file
                .step_schedule
                .clone()
                .unwrap_or(defaults.step_schedule),
            eps_gap: self.file.eps_gap.unwrap_or(defaults.eps_gap),
            v_max: self.file.v_max.unwrap_or(defaults.v_max),
            max_passes: self.file.max_passes.unwrap_or(defaults.max_passes),
            tie_break: self.file.tie_break.unwrap_or(defaults.tie_break),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn study(&self, seed_override: Option<u64>) -> Result<StudyConfig, CliError> {
        let defaults = StudyConfig::default();
        let cfg = StudyConfig {
            n: self.file.n.unwrap_or(defaults.n),
            matrices: self.file.matrices.unwrap_or(defaults.matrices),
            true_scale: self.file.true_scale.clone().unwrap_or(defaults.true_scale),
            perturb_prob: self.file.perturb_prob.unwrap_or(defaults.perturb_prob),
            weight_model: self.file.weight_model.unwrap_or(defaults.weight_model),
            seed: seed_override.or(self.file.seed).unwrap_or(defaults.seed),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}
