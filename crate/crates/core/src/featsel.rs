//! Statistical feature selection.
//!
//! Two passes over the feature columns:
//!
//! 1. redundancy: scanning left to right, drop any column whose absolute
//!    Pearson correlation with an already-kept column exceeds the threshold
//!    (first column wins);
//! 2. relevance: among survivors, keep only columns whose Welch two-sample
//!    t-test between the classes is significant.

use std::path::Path;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};
use thiserror::Error;

use crate::dsp::FeatureMatrix;

#[derive(Debug, Error)]
pub enum FeatselError {
    #[error("vectors must have equal length >= 2 (got {0} and {1})")]
    BadInput(usize, usize),
    #[error("zero variance input")]
    ZeroVariance,
    #[error("no features survived selection; thresholds are too aggressive")]
    AllDropped,
    #[error("labels must contain both classes")]
    SingleClass,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad selection file: {0}")]
    BadFile(#[from] serde_json::Error),
}

/// Sample Pearson correlation coefficient.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<f64, FeatselError> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(FeatselError::BadInput(x.len(), y.len()));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(FeatselError::ZeroVariance);
    }
    Ok(sxy / (sxx * syy).sqrt())
}

/// Welch's unequal-variance t-test. Returns `(t, p)` with a two-sided p-value
/// from the Student-t distribution at Welch-Satterthwaite degrees of freedom.
pub fn welch_t(a: &[f64], b: &[f64]) -> Result<(f64, f64), FeatselError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(FeatselError::BadInput(a.len(), b.len()));
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let ma = a.iter().sum::<f64>() / na;
    let mb = b.iter().sum::<f64>() / nb;
    let va = a.iter().map(|v| (v - ma) * (v - ma)).sum::<f64>() / (na - 1.0);
    let vb = b.iter().map(|v| (v - mb) * (v - mb)).sum::<f64>() / (nb - 1.0);
    let se2 = va / na + vb / nb;
    if se2 == 0.0 {
        if ma == mb {
            return Err(FeatselError::ZeroVariance);
        }
        // Constant groups with different means separate perfectly.
        let t = if ma > mb { f64::INFINITY } else { f64::NEG_INFINITY };
        return Ok((t, 0.0));
    }
    let t = (ma - mb) / se2.sqrt();
    let df = se2 * se2
        / ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0 by construction");
    let p = 2.0 * dist.cdf(-t.abs());
    Ok((t, p))
}

/// JSON representation for statistics that may be infinite (a perfectly
/// separating column has t = +-inf): non-finite values encode as strings.
mod json_float {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_str(&v.to_string())
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct KeptFeature {
    pub index: usize,
    pub name: String,
    #[serde(with = "json_float")]
    pub t: f64,
    #[serde(with = "json_float")]
    pub p: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CorrelationDrop {
    pub index: usize,
    pub name: String,
    /// Index of the already-kept column that triggered the drop.
    pub against: usize,
    pub r: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TtestDrop {
    pub index: usize,
    pub name: String,
    #[serde(with = "json_float")]
    pub t: f64,
    #[serde(with = "json_float")]
    pub p: f64,
}

/// Outcome of [`select_features`]; the three lists partition the columns.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct SelectionResult {
    pub corr_threshold: f64,
    pub p_threshold: f64,
    pub kept: Vec<KeptFeature>,
    pub dropped_by_correlation: Vec<CorrelationDrop>,
    pub dropped_by_ttest: Vec<TtestDrop>,
}

impl SelectionResult {
    pub fn kept_indices(&self) -> Vec<usize> {
        self.kept.iter().map(|k| k.index).collect()
    }

    pub fn save_json(&self, path: &Path) -> Result<(), FeatselError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(path, json)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self, FeatselError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}

/// Runs both selection passes over a feature table. `labels` assigns each row
/// to class 0 or 1. Constant columns count as uncorrelated in pass 1 and
/// insignificant in pass 2.
pub fn select_features(
    matrix: &FeatureMatrix,
    labels: &[usize],
    corr_threshold: f64,
    p_threshold: f64,
) -> Result<SelectionResult, FeatselError> {
    assert_eq!(matrix.rows.len(), labels.len(), "one label per row");
    if matrix.rows.is_empty() {
        return Err(FeatselError::BadInput(0, 0));
    }
    if labels.iter().all(|&l| l == labels[0]) {
        return Err(FeatselError::SingleClass);
    }

    let n_cols = matrix.names.len();
    let columns: Vec<Vec<f64>> = (0..n_cols).map(|c| matrix.column(c)).collect();

    // Pass 1: redundancy by correlation, first column wins.
    let mut kept_pass1: Vec<usize> = Vec::new();
    let mut dropped_by_correlation = Vec::new();
    for j in 0..n_cols {
        let mut dropped = None;
        for &k in &kept_pass1 {
            let r = match pearson(&columns[j], &columns[k]) {
                Ok(r) => r,
                Err(FeatselError::ZeroVariance) => 0.0,
                Err(e) => return Err(e),
            };
            if r.abs() > corr_threshold {
                dropped = Some((k, r));
                break;
            }
        }
        match dropped {
            Some((against, r)) => dropped_by_correlation.push(CorrelationDrop {
                index: j,
                name: matrix.names[j].clone(),
                against,
                r,
            }),
            None => kept_pass1.push(j),
        }
    }

    // Pass 2: class relevance by Welch t-test.
    let mut kept = Vec::new();
    let mut dropped_by_ttest = Vec::new();
    for &j in &kept_pass1 {
        let class0: Vec<f64> = columns[j]
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == 0)
            .map(|(v, _)| *v)
            .collect();
        let class1: Vec<f64> = columns[j]
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l != 0)
            .map(|(v, _)| *v)
            .collect();
        let (t, p) = match welch_t(&class0, &class1) {
            Ok(tp) => tp,
            Err(FeatselError::ZeroVariance) => (0.0, 1.0),
            Err(e) => return Err(e),
        };
        if p < p_threshold {
            kept.push(KeptFeature { index: j, name: matrix.names[j].clone(), t, p });
        } else {
            dropped_by_ttest.push(TtestDrop { index: j, name: matrix.names[j].clone(), t, p });
        }
    }

    if kept.is_empty() {
        return Err(FeatselError::AllDropped);
    }
    Ok(SelectionResult {
        corr_threshold,
        p_threshold,
        kept,
        dropped_by_correlation,
        dropped_by_ttest,
    })
}
