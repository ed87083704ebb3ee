//! JSON pipeline configuration.
//!
//! Every section defaults to the published hyperparameters; a config file
//! only needs the keys it overrides. Unknown keys are rejected so typos
//! cannot silently fall back to defaults. Command-line flags override their
//! config counterparts.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use omad_core::baselines::{ForestConfig, SvmConfig};
use omad_core::dataset::Condition;
use omad_core::dsp::WindowConfig;
use omad_core::eval::{DspConfig, SettingsConfig};
use omad_core::nn::TrainConfig;

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub data: DataSection,
    pub dsp: DspSection,
    pub artifact: ArtifactSection,
    pub features: FeaturesSection,
    pub model: ModelSection,
    pub training: TrainingSection,
    pub pruning: PruningSection,
    pub eval: EvalSection,
    pub seed: Seed,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Seed(pub u64);

impl Default for Seed {
    fn default() -> Self {
        Seed(7)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct DataSection {
    /// Directories of `.rd` / `.rd.gz` files.
    pub paths: Vec<PathBuf>,
    /// Optional stimulus-condition filter: "S1 obj", "S2 match", "S2 nomatch".
    pub condition: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DspSection {
    pub notch_f0_hz: f64,
    pub notch_q: f64,
    pub window_size: usize,
    pub overlap: f64,
}

impl Default for DspSection {
    fn default() -> Self {
        Self { notch_f0_hz: 60.0, notch_q: 30.0, window_size: 128, overlap: 0.8 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ArtifactSection {
    pub subjects: usize,
    pub trials_per_kind: usize,
    /// A window position is removed when at least this fraction of its
    /// channels is flagged as artifact.
    pub channel_fraction_threshold: f64,
}

impl Default for ArtifactSection {
    fn default() -> Self {
        Self { subjects: 3, trials_per_kind: 2, channel_fraction_threshold: 0.25 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FeaturesSection {
    pub corr_threshold: f64,
    pub p_threshold: f64,
}

impl Default for FeaturesSection {
    fn default() -> Self {
        Self { corr_threshold: 0.9, p_threshold: 0.05 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    /// "mlp" or "cnn".
    pub kind: String,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self { kind: "mlp".into() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingSection {
    pub epochs: usize,
    pub learning_rate: f32,
    pub batch_size: usize,
    pub dropout: f32,
}

impl Default for TrainingSection {
    fn default() -> Self {
        Self { epochs: 150, learning_rate: 0.001, batch_size: 64, dropout: 0.4 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PruningSection {
    pub initial_sparsity: f32,
    pub final_sparsity: f32,
    /// When absent, 20% of the run's total optimizer steps.
    pub begin_step: Option<u64>,
    /// When absent, 80% of the run's total optimizer steps.
    pub end_step: Option<u64>,
    pub frequency: u64,
}

impl Default for PruningSection {
    fn default() -> Self {
        Self {
            initial_sparsity: 0.0,
            final_sparsity: 0.5,
            begin_step: None,
            end_step: None,
            frequency: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvalSection {
    pub warmup: usize,
    pub reps: usize,
    pub test_fraction: f64,
}

impl Default for EvalSection {
    fn default() -> Self {
        Self { warmup: 5, reps: 30, test_fraction: 0.3 }
    }
}

impl PipelineConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let config = match path {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading config {}", path.display()))?;
                serde_json::from_str(&text)
                    .with_context(|| format!("parsing config {}", path.display()))?
            }
            None => PipelineConfig::default(),
        };
        config.validate()?;
        Ok(config)
    }

    /// Rejects values outside the declared invariants before any work starts.
    pub fn validate(&self) -> Result<()> {
        if self.dsp.notch_f0_hz <= 0.0 || self.dsp.notch_q <= 0.0 {
            bail!("dsp: notch frequency and Q must be positive");
        }
        if !(0.0..1.0).contains(&self.dsp.overlap) {
            bail!("dsp: overlap must lie in [0, 1)");
        }
        WindowConfig::new(self.dsp.window_size, self.dsp.overlap)
            .map_err(|e| anyhow::anyhow!("dsp: {e}"))?;
        if self.artifact.subjects == 0 || self.artifact.trials_per_kind == 0 {
            bail!("artifact: subjects and trials_per_kind must be positive");
        }
        if self.features.corr_threshold <= 0.0 || self.features.p_threshold <= 0.0 {
            bail!("features: thresholds must be positive");
        }
        if self.model.kind != "mlp" && self.model.kind != "cnn" {
            bail!("model: kind must be \"mlp\" or \"cnn\", got {:?}", self.model.kind);
        }
        if self.training.epochs == 0 || self.training.batch_size == 0 {
            bail!("training: epochs and batch_size must be positive");
        }
        if self.training.learning_rate <= 0.0 {
            bail!("training: learning_rate must be positive");
        }
        if !(0.0..1.0).contains(&self.training.dropout) {
            bail!("training: dropout must lie in [0, 1)");
        }
        for (name, s) in [
            ("initial_sparsity", self.pruning.initial_sparsity),
            ("final_sparsity", self.pruning.final_sparsity),
        ] {
            if !(0.0..1.0).contains(&s) {
                bail!("pruning: {name} must lie in [0, 1)");
            }
        }
        if self.pruning.initial_sparsity > self.pruning.final_sparsity {
            bail!("pruning: initial_sparsity exceeds final_sparsity");
        }
        if let (Some(b), Some(e)) = (self.pruning.begin_step, self.pruning.end_step) {
            if e <= b {
                bail!("pruning: end_step must exceed begin_step");
            }
        }
        if self.pruning.frequency == 0 {
            bail!("pruning: frequency must be positive");
        }
        if self.eval.reps == 0 {
            bail!("eval: reps must be positive");
        }
        if !(0.0..1.0).contains(&self.eval.test_fraction) || self.eval.test_fraction == 0.0 {
            bail!("eval: test_fraction must lie strictly between 0 and 1");
        }
        if let Some(c) = &self.data.condition {
            if Condition::parse(c).is_none() {
                bail!("data: unknown condition {c:?}");
            }
        }
        Ok(())
    }

    pub fn condition(&self) -> Option<Condition> {
        self.data.condition.as_deref().and_then(Condition::parse)
    }

    pub fn dsp_config(&self) -> DspConfig {
        DspConfig {
            notch_f0_hz: self.dsp.notch_f0_hz,
            notch_q: self.dsp.notch_q,
            window: WindowConfig::new(self.dsp.window_size, self.dsp.overlap)
                .expect("validated window config"),
            target_rate_hz: 128.0,
        }
    }

    pub fn train_config(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            epochs: self.training.epochs,
            learning_rate: self.training.learning_rate,
            batch_size: self.training.batch_size,
            dropout: self.training.dropout,
            seed,
        }
    }

    pub fn settings_config(&self, seed: u64) -> SettingsConfig {
        SettingsConfig {
            dsp: self.dsp_config(),
            test_fraction: self.eval.test_fraction,
            channel_fraction_threshold: self.artifact.channel_fraction_threshold,
            corr_threshold: self.features.corr_threshold,
            p_threshold: self.features.p_threshold,
            train: self.train_config(seed),
            forest: ForestConfig { seed, ..ForestConfig::default() },
            svm: SvmConfig { seed, ..SvmConfig::default() },
        }
    }
}
