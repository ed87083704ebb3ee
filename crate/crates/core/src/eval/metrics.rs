//! Confusion-matrix metrics.

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Standard accuracy / precision / recall / F1 with an explicit positive
/// class. A zero denominator makes precision or recall 0, and F1 is 0
/// whenever precision + recall is 0.
pub fn confusion_metrics(
    predicted: &[usize],
    actual: &[usize],
    positive_class: usize,
) -> Result<Metrics, EvalError> {
    if predicted.len() != actual.len() {
        return Err(EvalError::LengthMismatch(predicted.len(), actual.len()));
    }
    if predicted.is_empty() {
        return Err(EvalError::LengthMismatch(0, 0));
    }
    let mut tp = 0usize;
    let mut fp = 0usize;
    let mut tn = 0usize;
    let mut fsn = 0usize;
    for (&p, &a) in predicted.iter().zip(actual) {
        match (p == positive_class, a == positive_class) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fsn += 1,
            (false, false) => tn += 1,
        }
    }
    let accuracy = (tp + tn) as f64 / predicted.len() as f64;
    let precision = if tp + fp == 0 { 0.0 } else { tp as f64 / (tp + fp) as f64 };
    let recall = if tp + fsn == 0 { 0.0 } else { tp as f64 / (tp + fsn) as f64 };
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Metrics { accuracy, precision, recall, f1 })
}

/// Majority label among votes; ties go to the lower class index.
pub fn majority_vote(votes: &[usize], n_classes: usize) -> usize {
    let mut counts = vec![0usize; n_classes];
    for &v in votes {
        counts[v] += 1;
    }
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate().skip(1) {
        if c > counts[best] {
            best = i;
        }
    }
    best
}
