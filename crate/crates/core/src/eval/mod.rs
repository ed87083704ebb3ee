//! Evaluation: classification metrics, single-threaded latency benchmarks,
//! the sparsity sweep, and the three end-to-end experiment settings.

mod bench;
mod metrics;
mod pipeline;
mod reports;
mod settings;
mod sweep;

pub use bench::{hardware_descriptor, latency_bench, LatencyStats};
pub use metrics::{confusion_metrics, majority_vote, Metrics};
pub use pipeline::{
    artifact_windows, detector_flag_fractions, filter_window_groups, prepare_window_groups,
    raw_window_rows, train_artifact_detector, window_groups_to_features, windows_to_matrix,
    zscore_window, DetectorOutcome, DspConfig, WindowGroup,
};
pub use reports::{
    write_compression_csv, write_settings_csv, write_sweep_csv, CompressionRow, SettingsRow,
};
pub use settings::{run_setting, Setting, SettingReport, SettingsConfig};
pub use sweep::{sparsity_sweep, SweepConfig, SweepRow};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("predicted and actual labels differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("this setting needs a trained artifact detector")]
    MissingDetector,
    #[error("dataset error: {0}")]
    Dataset(#[from] crate::dataset::DatasetError),
    #[error("dsp error: {0}")]
    Dsp(#[from] crate::dsp::DspError),
    #[error("selection error: {0}")]
    Featsel(#[from] crate::featsel::FeatselError),
    #[error("network error: {0}")]
    Nn(#[from] crate::nn::NnError),
    #[error("baseline error: {0}")]
    Baseline(#[from] crate::baselines::BaselineError),
    #[error("prune error: {0}")]
    Prune(#[from] crate::prune::PruneError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
