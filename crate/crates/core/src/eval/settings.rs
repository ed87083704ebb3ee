//! The three experiment settings: every combination of artifact removal and
//! feature selection the evaluation compares, run over the random forest,
//! the SVM and the 7-layer network.

use std::collections::{BTreeMap, HashSet};

use rand::rngs::StdRng;
use rand::SeedableRng;

use super::metrics::{confusion_metrics, majority_vote, Metrics};
use super::pipeline::{
    detector_flag_fractions, filter_window_groups, prepare_window_groups, raw_window_rows,
    window_groups_to_features, DspConfig, WindowGroup,
};
use super::EvalError;
use crate::baselines::{
    predict_forest, predict_svm, train_forest, train_svm, ForestConfig, SvmConfig,
};
use crate::dataset::{split_trial_keys, Group, Recording, TrialKey};
use crate::featsel::select_features;
use crate::matrix::Matrix;
use crate::nn::{train, NeuralNet, TrainConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Setting {
    AllFeaturesNoRemoval,
    AllFeaturesWithRemoval,
    SelectedFeaturesWithRemoval,
}

impl Setting {
    pub fn name(&self) -> &'static str {
        match self {
            Setting::AllFeaturesNoRemoval => "all_features_no_artifact_removal",
            Setting::AllFeaturesWithRemoval => "all_features_with_artifact_removal",
            Setting::SelectedFeaturesWithRemoval => "selected_features_with_artifact_removal",
        }
    }

    pub fn removes_artifacts(&self) -> bool {
        !matches!(self, Setting::AllFeaturesNoRemoval)
    }

    pub fn selects_features(&self) -> bool {
        matches!(self, Setting::SelectedFeaturesWithRemoval)
    }

    pub fn from_index(idx: usize) -> Option<Self> {
        match idx {
            1 => Some(Setting::AllFeaturesNoRemoval),
            2 => Some(Setting::AllFeaturesWithRemoval),
            3 => Some(Setting::SelectedFeaturesWithRemoval),
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SettingsConfig {
    pub dsp: DspConfig,
    pub test_fraction: f64,
    pub channel_fraction_threshold: f64,
    pub corr_threshold: f64,
    pub p_threshold: f64,
    pub train: TrainConfig,
    pub forest: ForestConfig,
    pub svm: SvmConfig,
}

impl Default for SettingsConfig {
    fn default() -> Self {
        Self {
            dsp: DspConfig::default(),
            test_fraction: 0.3,
            channel_fraction_threshold: 0.25,
            corr_threshold: 0.9,
            p_threshold: 0.05,
            train: TrainConfig::default(),
            forest: ForestConfig::default(),
            svm: SvmConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SettingReport {
    pub setting: Setting,
    pub model: &'static str,
    /// Headline metrics at window granularity (positive class: alcoholic).
    pub window: Metrics,
    /// Majority-vote aggregation to whole trials.
    pub trial: Metrics,
    pub removed_groups: usize,
    pub total_groups: usize,
}

/// Runs one experiment setting end to end for all three models. `seed`
/// drives the trial split and every model's training; settings compared on
/// the same seed share their split exactly.
pub fn run_setting(
    setting: Setting,
    corpus: &[Recording],
    detector: Option<&NeuralNet>,
    cfg: &SettingsConfig,
    seed: u64,
) -> Result<Vec<SettingReport>, EvalError> {
    let mut groups = prepare_window_groups(corpus, &cfg.dsp)?;
    let total_groups = groups.len();
    let mut removed_groups = 0;
    if setting.removes_artifacts() {
        let detector = detector.ok_or(EvalError::MissingDetector)?;
        let fractions = detector_flag_fractions(detector, &groups)?;
        let (kept, removed) =
            filter_window_groups(groups, &fractions, cfg.channel_fraction_threshold);
        groups = kept;
        removed_groups = removed;
    }

    // Trial split, stratified by group, on whatever survived filtering.
    let trials: Vec<(TrialKey, String)> = {
        let mut seen = BTreeMap::new();
        for g in &groups {
            seen.entry(g.trial.clone()).or_insert_with(|| g.group.to_string());
        }
        seen.into_iter().collect()
    };
    let (_, test_keys) = split_trial_keys(&trials, cfg.test_fraction, seed)?;
    let test_set: HashSet<&TrialKey> = test_keys.iter().collect();

    let fs = cfg.dsp.target_rate_hz;
    let features = window_groups_to_features(&groups, fs);
    let (train_rows, test_rows): (Vec<usize>, Vec<usize>) =
        (0..groups.len()).partition(|&i| !test_set.contains(&groups[i].trial));
    let labels: Vec<usize> = groups.iter().map(|g| g.group.class_index()).collect();

    let mut reports = Vec::new();

    // Random forest on feature rows.
    {
        let x_train: Vec<Vec<f64>> =
            train_rows.iter().map(|&i| features.rows[i].clone()).collect();
        let y_train: Vec<usize> = train_rows.iter().map(|&i| labels[i]).collect();
        let x_test: Vec<Vec<f64>> = test_rows.iter().map(|&i| features.rows[i].clone()).collect();
        let y_test: Vec<usize> = test_rows.iter().map(|&i| labels[i]).collect();
        let forest_cfg = ForestConfig { seed, ..cfg.forest.clone() };
        let forest = train_forest(&x_train, &y_train, &forest_cfg)?;
        let (predicted, _) = predict_forest(&forest, &x_test)?;
        let window = confusion_metrics(&predicted, &y_test, Group::Alcoholic.class_index())?;
        let trial = trial_metrics(&groups, &test_rows, &predicted)?;
        reports.push(SettingReport {
            setting,
            model: "rf",
            window,
            trial,
            removed_groups,
            total_groups,
        });
    }

    // RBF SVM on feature rows; labels mapped to -1/+1 (+1 alcoholic).
    {
        let x_train: Vec<Vec<f64>> =
            train_rows.iter().map(|&i| features.rows[i].clone()).collect();
        let y_train: Vec<i8> =
            train_rows.iter().map(|&i| if labels[i] == 1 { 1 } else { -1 }).collect();
        let x_test: Vec<Vec<f64>> = test_rows.iter().map(|&i| features.rows[i].clone()).collect();
        let y_test: Vec<usize> = test_rows.iter().map(|&i| labels[i]).collect();
        let svm_cfg = SvmConfig { seed, ..cfg.svm.clone() };
        let model = train_svm(&x_train, &y_train, &svm_cfg)?;
        let predicted: Vec<usize> = predict_svm(&model, &x_test)?
            .into_iter()
            .map(|l| usize::from(l == 1))
            .collect();
        let window = confusion_metrics(&predicted, &y_test, Group::Alcoholic.class_index())?;
        let trial = trial_metrics(&groups, &test_rows, &predicted)?;
        reports.push(SettingReport {
            setting,
            model: "svm",
            window,
            trial,
            removed_groups,
            total_groups,
        });
    }

    // 7-layer MLP: raw per-channel windows, or selected feature vectors in
    // the selection setting.
    {
        let train_cfg = TrainConfig { seed, ..cfg.train.clone() };
        let mut rng = StdRng::seed_from_u64(seed);
        let (window, trial) = if setting.selects_features() {
            let y_train: Vec<usize> = train_rows.iter().map(|&i| labels[i]).collect();
            let train_features = subset(&features.rows, &train_rows);
            let train_matrix = crate::dsp::FeatureMatrix {
                names: features.names.clone(),
                rows: train_features,
                group_labels: vec![None; train_rows.len()],
                artifact_labels: vec![None; train_rows.len()],
            };
            let selection =
                select_features(&train_matrix, &y_train, cfg.corr_threshold, cfg.p_threshold)?;
            let kept = selection.kept_indices();
            let (x_train, stats) = standardized_columns(&features.rows, &train_rows, &kept, None);
            let (x_test, _) =
                standardized_columns(&features.rows, &test_rows, &kept, Some(&stats));
            let y_test: Vec<usize> = test_rows.iter().map(|&i| labels[i]).collect();
            let mut net = NeuralNet::main_mlp(kept.len(), train_cfg.dropout, &mut rng);
            train(&mut net, &x_train, &y_train, &train_cfg, |_, _| {})?;
            let (predicted, _) = net.predict(&x_test)?;
            let window =
                confusion_metrics(&predicted, &y_test, Group::Alcoholic.class_index())?;
            let trial = trial_metrics(&groups, &test_rows, &predicted)?;
            (window, trial)
        } else {
            let (x_all, y_all, group_index) = raw_window_rows(&groups);
            let (train_idx, test_idx): (Vec<usize>, Vec<usize>) = (0..x_all.rows())
                .partition(|&r| !test_set.contains(&groups[group_index[r]].trial));
            let x_train = x_all.gather_rows(&train_idx);
            let y_train: Vec<usize> = train_idx.iter().map(|&r| y_all[r]).collect();
            let x_test = x_all.gather_rows(&test_idx);
            let y_test: Vec<usize> = test_idx.iter().map(|&r| y_all[r]).collect();
            let mut net = NeuralNet::main_mlp(x_all.cols(), train_cfg.dropout, &mut rng);
            train(&mut net, &x_train, &y_train, &train_cfg, |_, _| {})?;
            let (predicted, _) = net.predict(&x_test)?;
            let window =
                confusion_metrics(&predicted, &y_test, Group::Alcoholic.class_index())?;
            // Aggregate per-channel window votes up to trials.
            let mut votes: BTreeMap<&TrialKey, (Vec<usize>, usize)> = BTreeMap::new();
            for (pos, &r) in test_idx.iter().enumerate() {
                let g = &groups[group_index[r]];
                let entry =
                    votes.entry(&g.trial).or_insert_with(|| (Vec::new(), g.group.class_index()));
                entry.0.push(predicted[pos]);
            }
            let trial = vote_metrics(votes)?;
            (window, trial)
        };
        reports.push(SettingReport {
            setting,
            model: "mlp7",
            window,
            trial,
            removed_groups,
            total_groups,
        });
    }

    Ok(reports)
}

fn subset(rows: &[Vec<f64>], indices: &[usize]) -> Vec<Vec<f64>> {
    indices.iter().map(|&i| rows[i].clone()).collect()
}

/// Per-trial majority vote over row predictions for rows that are one per
/// window group.
fn trial_metrics(
    groups: &[WindowGroup],
    row_indices: &[usize],
    predicted: &[usize],
) -> Result<Metrics, EvalError> {
    let mut votes: BTreeMap<&TrialKey, (Vec<usize>, usize)> = BTreeMap::new();
    for (pos, &i) in row_indices.iter().enumerate() {
        let g = &groups[i];
        let entry = votes.entry(&g.trial).or_insert_with(|| (Vec::new(), g.group.class_index()));
        entry.0.push(predicted[pos]);
    }
    vote_metrics(votes)
}

fn vote_metrics(
    votes: BTreeMap<&TrialKey, (Vec<usize>, usize)>,
) -> Result<Metrics, EvalError> {
    let mut predicted = Vec::with_capacity(votes.len());
    let mut actual = Vec::with_capacity(votes.len());
    for (_, (v, label)) in votes {
        predicted.push(majority_vote(&v, 2));
        actual.push(label);
    }
    confusion_metrics(&predicted, &actual, Group::Alcoholic.class_index())
}

/// Column-standardized f32 matrix over the selected feature columns.
/// Statistics fit on the given rows unless pre-fit stats are supplied.
fn standardized_columns(
    rows: &[Vec<f64>],
    row_indices: &[usize],
    columns: &[usize],
    stats: Option<&(Vec<f64>, Vec<f64>)>,
) -> (Matrix, (Vec<f64>, Vec<f64>)) {
    let owned_stats = stats.cloned().unwrap_or_else(|| {
        let n = row_indices.len() as f64;
        let mut means = vec![0.0; columns.len()];
        for &r in row_indices {
            for (m, &c) in means.iter_mut().zip(columns) {
                *m += rows[r][c];
            }
        }
        for m in &mut means {
            *m /= n;
        }
        let mut stds = vec![0.0; columns.len()];
        for &r in row_indices {
            for ((s, &c), m) in stds.iter_mut().zip(columns).zip(&means) {
                *s += (rows[r][c] - m) * (rows[r][c] - m);
            }
        }
        for s in &mut stds {
            *s = (*s / n).sqrt();
            if *s == 0.0 {
                *s = 1.0;
            }
        }
        (means, stds)
    });
    let (means, stds) = &owned_stats;
    let data: Vec<Vec<f32>> = row_indices
        .iter()
        .map(|&r| {
            columns
                .iter()
                .enumerate()
                .map(|(k, &c)| ((rows[r][c] - means[k]) / stds[k]) as f32)
                .collect()
        })
        .collect();
    (Matrix::from_rows(&data), owned_stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{generate_main_corpus, MainCorpusConfig};

    fn quick_config() -> SettingsConfig {
        SettingsConfig {
            train: TrainConfig { epochs: 3, ..TrainConfig::default() },
            forest: ForestConfig { n_estimators: 5, ..ForestConfig::default() },
            ..SettingsConfig::default()
        }
    }

    fn tiny_corpus() -> Vec<Recording> {
        let cfg = MainCorpusConfig {
            subjects_per_group: 3,
            trials_per_subject: 3,
            channels: 4,
            artifact_fraction: 0.0,
            ..MainCorpusConfig::default()
        };
        generate_main_corpus(&cfg, 5).recordings
    }

    #[test]
    fn setting_one_reports_all_three_models() {
        let corpus = tiny_corpus();
        let reports =
            run_setting(Setting::AllFeaturesNoRemoval, &corpus, None, &quick_config(), 1)
                .unwrap();
        let models: Vec<&str> = reports.iter().map(|r| r.model).collect();
        assert_eq!(models, vec!["rf", "svm", "mlp7"]);
        for r in &reports {
            assert!(r.window.accuracy >= 0.0 && r.window.accuracy <= 1.0);
            assert_eq!(r.removed_groups, 0);
        }
    }

    #[test]
    fn removal_settings_require_a_detector() {
        let corpus = tiny_corpus();
        assert!(matches!(
            run_setting(Setting::AllFeaturesWithRemoval, &corpus, None, &quick_config(), 1),
            Err(EvalError::MissingDetector)
        ));
    }

    #[test]
    fn setting_names_are_stable() {
        assert_eq!(Setting::from_index(1), Some(Setting::AllFeaturesNoRemoval));
        assert_eq!(Setting::from_index(2), Some(Setting::AllFeaturesWithRemoval));
        assert_eq!(Setting::from_index(3), Some(Setting::SelectedFeaturesWithRemoval));
        assert_eq!(Setting::from_index(0), None);
    }
}
