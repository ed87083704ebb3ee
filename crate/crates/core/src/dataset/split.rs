//! Trial-level stratified splits.
//!
//! Splits operate on whole trials so that overlapping windows from one trial
//! can never leak across the train/test boundary.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::types::{TrialKey, WindowedExample};
use super::DatasetError;

/// Splits trial keys into `(train, test)`, stratified by each trial's class
/// string. Within every stratum `round(test_fraction * n)` trials go to the
/// test side. Deterministic for a given seed.
pub fn split_trial_keys(
    trials: &[(TrialKey, String)],
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<TrialKey>, Vec<TrialKey>), DatasetError> {
    assert!(
        test_fraction > 0.0 && test_fraction < 1.0,
        "test fraction must lie strictly between 0 and 1"
    );
    let mut strata: BTreeMap<&str, Vec<&TrialKey>> = BTreeMap::new();
    for (key, class) in trials {
        let entry = strata.entry(class.as_str()).or_default();
        if !entry.contains(&key) {
            entry.push(key);
        }
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (class, mut keys) in strata {
        keys.sort();
        keys.shuffle(&mut rng);
        let n_test = (test_fraction * keys.len() as f64).round() as usize;
        if n_test == 0 || n_test == keys.len() {
            return Err(DatasetError::DegenerateSplit(format!(
                "class {class:?} with {} trials would leave one side empty",
                keys.len()
            )));
        }
        for (i, key) in keys.into_iter().enumerate() {
            if i < n_test {
                test.push(key.clone());
            } else {
                train.push(key.clone());
            }
        }
    }
    train.sort();
    test.sort();
    Ok((train, test))
}

/// Splits windowed examples at trial granularity, stratified by group label.
/// Every window of one trial lands on the same side.
pub fn split(
    examples: Vec<WindowedExample>,
    test_fraction: f64,
    seed: u64,
) -> Result<(Vec<WindowedExample>, Vec<WindowedExample>), DatasetError> {
    let mut trials: BTreeMap<&TrialKey, String> = BTreeMap::new();
    for ex in &examples {
        let class = ex.group_label.map(|g| g.to_string()).unwrap_or_default();
        trials.entry(&ex.source).or_insert(class);
    }
    let trial_list: Vec<(TrialKey, String)> =
        trials.into_iter().map(|(k, v)| (k.clone(), v)).collect();
    let (_, test_keys) = split_trial_keys(&trial_list, test_fraction, seed)?;
    let test_set: std::collections::HashSet<&TrialKey> = test_keys.iter().collect();
    let mut train = Vec::new();
    let mut test = Vec::new();
    for ex in examples {
        if test_set.contains(&ex.source) {
            test.push(ex);
        } else {
            train.push(ex);
        }
    }
    Ok((train, test))
}
