//! Wiring between corpora and models: conditioning, windowing, detector
//! application and matrix assembly.
//!
//! The whole classification pipeline runs at the artifact detector's rate
//! (128 Hz): every channel is notch-filtered at its native rate, halved down
//! to the detector rate when it comes in at 256 Hz, and cut into per-channel
//! windows. Windows at the same offset form a [`WindowGroup`]; the detector
//! scores each channel of a group and the group is removed when the flagged
//! fraction reaches the configured threshold. This keeps the detector
//! channel-count agnostic: it never needs a mapping between the artifact
//! headset's electrodes and the main cap's.

use rand::rngs::StdRng;
use rand::SeedableRng;

use super::metrics::{confusion_metrics, Metrics};
use super::EvalError;
use crate::dataset::{
    split_trial_keys, ArtifactRecording, Group, Recording, TrialKey, WindowedExample,
};
use crate::dsp::{
    extract_features, make_windows, notch_filter, resample_half, WindowConfig, FeatureMatrix,
    FEATURE_NAMES,
};
use crate::matrix::Matrix;
use crate::nn::{train, NeuralNet, TrainConfig};
use crate::prune::{apply_pruning, PruningSchedule};

/// Signal-conditioning parameters.
#[derive(Debug, Clone)]
pub struct DspConfig {
    pub notch_f0_hz: f64,
    pub notch_q: f64,
    pub window: WindowConfig,
    /// Rate the pipeline (and the detector) operates at.
    pub target_rate_hz: f64,
}

impl Default for DspConfig {
    fn default() -> Self {
        Self {
            notch_f0_hz: 60.0,
            notch_q: 30.0,
            window: WindowConfig::new(128, 0.8).expect("static config"),
            target_rate_hz: 128.0,
        }
    }
}

/// All channels of one window position of one trial.
#[derive(Debug, Clone)]
pub struct WindowGroup {
    pub trial: TrialKey,
    pub group: Group,
    pub position: usize,
    pub channel_names: Vec<String>,
    pub channels: Vec<Vec<f64>>,
}

/// Conditions every channel (notch, resample to the target rate) and cuts
/// aligned per-channel windows.
pub fn prepare_window_groups(
    corpus: &[Recording],
    dsp: &DspConfig,
) -> Result<Vec<WindowGroup>, EvalError> {
    let mut out = Vec::new();
    for rec in corpus {
        let mut fs = rec.sample_rate_hz;
        let mut conditioned: Vec<Vec<f64>> = Vec::with_capacity(rec.channels.len());
        for channel in &rec.data {
            conditioned.push(notch_filter(channel, fs, dsp.notch_f0_hz, dsp.notch_q)?);
        }
        while fs > dsp.target_rate_hz * 1.5 {
            conditioned = conditioned.iter().map(|c| resample_half(c, fs)).collect();
            fs /= 2.0;
        }
        let per_channel: Vec<Vec<Vec<f64>>> = conditioned
            .iter()
            .map(|c| make_windows(c, &dsp.window))
            .collect::<Result<_, _>>()?;
        let positions = per_channel.first().map_or(0, Vec::len);
        for position in 0..positions {
            out.push(WindowGroup {
                trial: rec.trial_key(),
                group: rec.group,
                position,
                channel_names: rec.channels.clone(),
                channels: per_channel.iter().map(|w| w[position].clone()).collect(),
            });
        }
    }
    Ok(out)
}

/// Z-scores one window; constant windows map to all zeros.
pub fn zscore_window(window: &[f64]) -> Vec<f32> {
    let n = window.len() as f64;
    let mean = window.iter().sum::<f64>() / n;
    let var = window.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    if std == 0.0 {
        return vec![0.0; window.len()];
    }
    window.iter().map(|v| ((v - mean) / std) as f32).collect()
}

/// Fraction of channels the detector flags as artifact, per window group.
pub fn detector_flag_fractions(
    detector: &NeuralNet,
    groups: &[WindowGroup],
) -> Result<Vec<f64>, EvalError> {
    let mut fractions = Vec::with_capacity(groups.len());
    for group in groups {
        let rows: Vec<Vec<f32>> = group.channels.iter().map(|w| zscore_window(w)).collect();
        let batch = Matrix::from_rows(&rows);
        let (labels, _) = detector.predict(&batch)?;
        let flagged = labels.iter().filter(|&&l| l == 1).count();
        fractions.push(flagged as f64 / labels.len() as f64);
    }
    Ok(fractions)
}

/// Drops groups whose flagged-channel fraction reaches the threshold.
/// Returns the kept groups and the number removed.
pub fn filter_window_groups(
    groups: Vec<WindowGroup>,
    fractions: &[f64],
    threshold: f64,
) -> (Vec<WindowGroup>, usize) {
    let before = groups.len();
    let kept: Vec<WindowGroup> = groups
        .into_iter()
        .zip(fractions)
        .filter(|(_, &f)| f < threshold)
        .map(|(g, _)| g)
        .collect();
    let removed = before - kept.len();
    (kept, removed)
}

/// One feature row per window group: columns named `<channel>_<feature>`.
pub fn window_groups_to_features(groups: &[WindowGroup], fs: f64) -> FeatureMatrix {
    let names: Vec<String> = groups
        .first()
        .map(|g| {
            g.channel_names
                .iter()
                .flat_map(|c| FEATURE_NAMES.iter().map(move |f| format!("{c}_{f}")))
                .collect()
        })
        .unwrap_or_default();
    let mut matrix = FeatureMatrix::new(names);
    for group in groups {
        let mut row = Vec::with_capacity(group.channels.len() * FEATURE_NAMES.len());
        for window in &group.channels {
            row.extend(extract_features(window, fs).0);
        }
        matrix.push_row(row, Some(group.group.to_string()), None);
    }
    matrix
}

/// Flattens groups into per-channel rows for the raw-window models: one
/// z-scored row per (group, channel), labeled with the trial's class.
/// Also returns each row's group index for vote aggregation.
pub fn raw_window_rows(groups: &[WindowGroup]) -> (Matrix, Vec<usize>, Vec<usize>) {
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut group_index = Vec::new();
    for (gi, group) in groups.iter().enumerate() {
        for window in &group.channels {
            rows.push(zscore_window(window));
            labels.push(group.group.class_index());
            group_index.push(gi);
        }
    }
    (Matrix::from_rows(&rows), labels, group_index)
}

/// Cuts labeled per-channel windows from artifact-collection recordings.
/// A window is an artifact example when it overlaps the scripted interval.
pub fn artifact_windows(
    recordings: &[ArtifactRecording],
    dsp: &DspConfig,
) -> Result<Vec<WindowedExample>, EvalError> {
    let mut out = Vec::new();
    for rec in recordings {
        let fs = rec.sample_rate_hz;
        let stride = dsp.window.stride();
        for (c, channel) in rec.data.iter().enumerate() {
            let filtered = notch_filter(channel, fs, dsp.notch_f0_hz, dsp.notch_q)?;
            let windows = make_windows(&filtered, &dsp.window)?;
            for (w, samples) in windows.into_iter().enumerate() {
                let start_s = (w * stride) as f64 / fs;
                let end_s = start_s + dsp.window.window_size as f64 / fs;
                let overlaps =
                    end_s > rec.artifact_interval_s.0 && start_s < rec.artifact_interval_s.1;
                out.push(WindowedExample {
                    source: rec.trial_key(),
                    channel: rec.channels[c].clone(),
                    samples,
                    group_label: None,
                    artifact_label: Some(overlaps),
                });
            }
        }
    }
    Ok(out)
}

/// Z-scored matrix plus 0/1 labels (1 = artifact) from windowed examples.
pub fn windows_to_matrix(examples: &[WindowedExample]) -> (Matrix, Vec<usize>) {
    let rows: Vec<Vec<f32>> = examples.iter().map(|e| zscore_window(&e.samples)).collect();
    let labels = examples
        .iter()
        .map(|e| usize::from(e.artifact_label.unwrap_or(false)))
        .collect();
    (Matrix::from_rows(&rows), labels)
}

pub struct DetectorOutcome {
    pub net: NeuralNet,
    /// Window-level metrics on the held-out trials (positive class:
    /// artifact).
    pub metrics: Metrics,
    pub train_windows: usize,
    pub test_windows: usize,
}

/// Trains the 3-layer artifact detector on a 70:30 trial split of the
/// artifact corpus, optionally with a pruning schedule, and evaluates it on
/// the held-out windows.
pub fn train_artifact_detector(
    corpus: &[ArtifactRecording],
    dsp: &DspConfig,
    cfg: &TrainConfig,
    schedule: Option<&PruningSchedule>,
) -> Result<DetectorOutcome, EvalError> {
    let examples = artifact_windows(corpus, dsp)?;
    // Stratify trials by artifact kind.
    let trials: Vec<(TrialKey, String)> = corpus
        .iter()
        .map(|r| (r.trial_key(), r.artifact_kind.to_string()))
        .collect();
    let (_, test_keys) = split_trial_keys(&trials, 0.3, cfg.seed)?;
    let test_set: std::collections::HashSet<&TrialKey> = test_keys.iter().collect();
    let (test_examples, train_examples): (Vec<_>, Vec<_>) =
        examples.into_iter().partition(|e| test_set.contains(&e.source));

    let (x_train, y_train) = windows_to_matrix(&train_examples);
    let (x_test, y_test) = windows_to_matrix(&test_examples);

    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let mut net = NeuralNet::artifact_mlp(&mut rng);
    match schedule {
        Some(schedule) => {
            train(&mut net, &x_train, &y_train, cfg, |step, net| {
                apply_pruning(net, schedule, step)
            })?;
        }
        None => {
            train(&mut net, &x_train, &y_train, cfg, |_, _| {})?;
        }
    }
    let (predicted, _) = net.predict(&x_test)?;
    let metrics = confusion_metrics(&predicted, &y_test, 1)?;
    Ok(DetectorOutcome {
        net,
        metrics,
        train_windows: y_train.len(),
        test_windows: y_test.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{
        generate_artifact_corpus, generate_main_corpus, ArtifactCorpusConfig, MainCorpusConfig,
    };

    fn small_main_corpus() -> crate::dataset::MainCorpus {
        let cfg = MainCorpusConfig {
            subjects_per_group: 2,
            trials_per_subject: 2,
            channels: 4,
            artifact_fraction: 0.0,
            ..MainCorpusConfig::default()
        };
        generate_main_corpus(&cfg, 42)
    }

    #[test]
    fn one_second_trials_give_one_window_group_per_trial() {
        let corpus = small_main_corpus();
        let groups = prepare_window_groups(&corpus.recordings, &DspConfig::default()).unwrap();
        assert_eq!(groups.len(), corpus.recordings.len());
        for g in &groups {
            assert_eq!(g.channels.len(), 4);
            assert_eq!(g.channels[0].len(), 128);
        }
    }

    #[test]
    fn artifact_windows_have_the_expected_label_split() {
        let corpus = generate_artifact_corpus(
            &ArtifactCorpusConfig { subjects: 1, trials_per_kind: 1 },
            3,
        );
        let windows = artifact_windows(&corpus, &DspConfig::default()).unwrap();
        // 2 recordings x 14 channels x 47 windows.
        assert_eq!(windows.len(), 2 * 14 * 47);
        // Windows [16, 35] overlap seconds 4-7: 20 of 47 per channel.
        let artifact = windows.iter().filter(|w| w.artifact_label == Some(true)).count();
        assert_eq!(artifact, 2 * 14 * 20);
    }

    #[test]
    fn zscored_windows_are_centered() {
        let z = zscore_window(&[1.0, 2.0, 3.0, 4.0]);
        let mean: f32 = z.iter().sum::<f32>() / 4.0;
        assert!(mean.abs() < 1e-6);
        assert_eq!(zscore_window(&[5.0; 16]), vec![0.0; 16]);
    }

    #[test]
    fn feature_rows_line_up_with_channels() {
        let corpus = small_main_corpus();
        let groups = prepare_window_groups(&corpus.recordings, &DspConfig::default()).unwrap();
        let features = window_groups_to_features(&groups, 128.0);
        assert_eq!(features.names.len(), 4 * FEATURE_NAMES.len());
        assert_eq!(features.rows.len(), groups.len());
        assert!(features.names[0].starts_with("FP1_"));
    }

    #[test]
    fn raw_rows_flatten_channels() {
        let corpus = small_main_corpus();
        let groups = prepare_window_groups(&corpus.recordings, &DspConfig::default()).unwrap();
        let (x, y, gi) = raw_window_rows(&groups);
        assert_eq!(x.rows(), groups.len() * 4);
        assert_eq!(x.cols(), 128);
        assert_eq!(y.len(), x.rows());
        assert_eq!(gi.len(), x.rows());
        assert_eq!(gi[0], 0);
    }

    #[test]
    fn filtering_removes_flagged_groups() {
        let corpus = small_main_corpus();
        let groups = prepare_window_groups(&corpus.recordings, &DspConfig::default()).unwrap();
        let n = groups.len();
        let mut fractions = vec![0.0; n];
        fractions[0] = 1.0;
        let (kept, removed) = filter_window_groups(groups, &fractions, 0.25);
        assert_eq!(removed, 1);
        assert_eq!(kept.len(), n - 1);
    }
}
