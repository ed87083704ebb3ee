//! RBF-kernel SVM trained with simplified sequential minimal optimization.

use std::path::Path;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use super::BaselineError;

#[derive(Debug, Clone)]
pub struct SvmConfig {
    pub c: f64,
    pub smo_tolerance: f64,
    /// Hard cap on optimization sweeps over the training set.
    pub max_passes: usize,
    pub seed: u64,
}

impl Default for SvmConfig {
    fn default() -> Self {
        Self { c: 1.0, smo_tolerance: 1e-3, max_passes: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    /// Standardized support vectors.
    pub support_vectors: Vec<Vec<f64>>,
    /// Training indices of the support vectors.
    pub support_indices: Vec<usize>,
    /// `alpha_i * y_i` per support vector.
    pub coef: Vec<f64>,
    pub bias: f64,
    pub gamma: f64,
    /// Per-column standardization statistics of the training matrix.
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// False when the sweep cap was hit with KKT violations outstanding;
    /// the model is then the best found so far.
    pub converged: bool,
}

pub fn rbf_kernel(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let dist2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * dist2).exp()
}

/// Trains a binary SVM on rows of features with labels in `{-1, +1}`.
///
/// Features are standardized internally (statistics saved into the model) and
/// gamma follows the "scale" convention `1 / (d * var)` over the standardized
/// matrix. The dual is optimized by simplified SMO: sweeps that pick a random
/// second index for every KKT-violating first index, until a full sweep makes
/// no progress or the sweep cap is reached.
pub fn train_svm(x: &[Vec<f64>], y: &[i8], cfg: &SvmConfig) -> Result<SvmModel, BaselineError> {
    assert_eq!(x.len(), y.len(), "one label per row");
    if x.is_empty() {
        return Err(BaselineError::DegenerateData("empty training set".into()));
    }
    for &label in y {
        if label != 1 && label != -1 {
            return Err(BaselineError::BadLabel(label));
        }
    }
    if y.iter().all(|&l| l == y[0]) {
        return Err(BaselineError::DegenerateData("single-class labels".into()));
    }

    let n = x.len();
    let d = x[0].len();
    let (means, stds) = standardization_stats(x);
    let xs: Vec<Vec<f64>> = x.iter().map(|row| standardize_row(row, &means, &stds)).collect();

    // "Scale" gamma over the standardized matrix.
    let flat_var = {
        let total: f64 = xs.iter().flat_map(|r| r.iter()).sum();
        let count = (n * d) as f64;
        let mean = total / count;
        let ss: f64 = xs.iter().flat_map(|r| r.iter()).map(|v| (v - mean) * (v - mean)).sum();
        ss / count
    };
    let gamma = if flat_var > 0.0 { 1.0 / (d as f64 * flat_var) } else { 1.0 / d as f64 };

    // Kernel matrix; corpora here are small enough to hold it whole.
    let mut kernel = vec![0.0f64; n * n];
    for i in 0..n {
        for j in i..n {
            let k = rbf_kernel(&xs[i], &xs[j], gamma);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }

    let yf: Vec<f64> = y.iter().map(|&l| l as f64).collect();
    let mut alphas = vec![0.0f64; n];
    let mut bias = 0.0f64;
    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let decision = |alphas: &[f64], bias: f64, i: usize| -> f64 {
        let mut f = bias;
        for j in 0..n {
            if alphas[j] != 0.0 {
                f += alphas[j] * yf[j] * kernel[j * n + i];
            }
        }
        f
    };

    let kkt_violations = |alphas: &[f64], bias: f64| -> usize {
        (0..n)
            .filter(|&i| {
                let ei = decision(alphas, bias, i) - yf[i];
                (yf[i] * ei < -cfg.smo_tolerance && alphas[i] < cfg.c)
                    || (yf[i] * ei > cfg.smo_tolerance && alphas[i] > 0.0)
            })
            .count()
    };

    let mut converged = false;
    let mut stalled_sweeps = 0usize;
    for _sweep in 0..cfg.max_passes {
        let mut changed = 0usize;
        for i in 0..n {
            let ei = decision(&alphas, bias, i) - yf[i];
            let violates = (yf[i] * ei < -cfg.smo_tolerance && alphas[i] < cfg.c)
                || (yf[i] * ei > cfg.smo_tolerance && alphas[i] > 0.0);
            if !violates {
                continue;
            }
            // Try partners in a random rotation until one gives a usable step.
            let start = rng.gen_range(0..n);
            for offset in 0..n {
                let j = (start + offset) % n;
                if j == i {
                    continue;
                }
                let ej = decision(&alphas, bias, j) - yf[j];
                let (ai_old, aj_old) = (alphas[i], alphas[j]);
                let (lo, hi) = if yf[i] != yf[j] {
                    ((aj_old - ai_old).max(0.0), (cfg.c + aj_old - ai_old).min(cfg.c))
                } else {
                    ((ai_old + aj_old - cfg.c).max(0.0), (ai_old + aj_old).min(cfg.c))
                };
                if lo >= hi {
                    continue;
                }
                let eta = 2.0 * kernel[i * n + j] - kernel[i * n + i] - kernel[j * n + j];
                if eta >= 0.0 {
                    continue;
                }
                let mut aj = aj_old - yf[j] * (ei - ej) / eta;
                aj = aj.clamp(lo, hi);
                if (aj - aj_old).abs() < 1e-7 {
                    continue;
                }
                let ai = ai_old + yf[i] * yf[j] * (aj_old - aj);
                // Snap arithmetic dust onto the box bounds.
                let snap = |a: f64| {
                    if a < 1e-10 {
                        0.0
                    } else if a > cfg.c - 1e-10 {
                        cfg.c
                    } else {
                        a
                    }
                };
                let (ai, aj) = (snap(ai), snap(aj));
                alphas[i] = ai;
                alphas[j] = aj;

                let b1 = bias - ei
                    - yf[i] * (ai - ai_old) * kernel[i * n + i]
                    - yf[j] * (aj - aj_old) * kernel[i * n + j];
                let b2 = bias - ej
                    - yf[i] * (ai - ai_old) * kernel[i * n + j]
                    - yf[j] * (aj - aj_old) * kernel[j * n + j];
                bias = if ai > 0.0 && ai < cfg.c {
                    b1
                } else if aj > 0.0 && aj < cfg.c {
                    b2
                } else {
                    (b1 + b2) / 2.0
                };
                changed += 1;
                break;
            }
        }
        // Verify KKT on the frozen state; mid-sweep reads see a moving target.
        if kkt_violations(&alphas, bias) == 0 {
            converged = true;
            break;
        }
        // A violating index can fail to move when no partner gives a usable
        // step; retries across sweeps usually resolve it, but bail out if
        // nothing moves for a long stretch.
        stalled_sweeps = if changed == 0 { stalled_sweeps + 1 } else { 0 };
        if stalled_sweeps >= 20 {
            break;
        }
    }
    if !converged {
        log::warn!(
            "SMO stopped after the sweep cap ({}) with KKT violations outstanding",
            cfg.max_passes
        );
    }

    let mut support_vectors = Vec::new();
    let mut support_indices = Vec::new();
    let mut coef = Vec::new();
    for i in 0..n {
        if alphas[i] > 1e-12 {
            support_vectors.push(xs[i].clone());
            support_indices.push(i);
            coef.push(alphas[i] * yf[i]);
        }
    }
    Ok(SvmModel {
        support_vectors,
        support_indices,
        coef,
        bias,
        gamma,
        means,
        stds,
        converged,
    })
}

fn standardization_stats(x: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len() as f64;
    let d = x[0].len();
    let mut means = vec![0.0f64; d];
    for row in x {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    for m in &mut means {
        *m /= n;
    }
    let mut stds = vec![0.0f64; d];
    for row in x {
        for ((s, v), m) in stds.iter_mut().zip(row).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    for s in &mut stds {
        *s = (*s / n).sqrt();
        if *s == 0.0 {
            *s = 1.0;
        }
    }
    (means, stds)
}

fn standardize_row(row: &[f64], means: &[f64], stds: &[f64]) -> Vec<f64> {
    row.iter().zip(means).zip(stds).map(|((v, m), s)| (v - m) / s).collect()
}

/// `sum_i coef_i K(sv_i, x) + b` per row, after standardization.
pub fn decision_values(model: &SvmModel, rows: &[Vec<f64>]) -> Result<Vec<f64>, BaselineError> {
    let d = model.means.len();
    rows.iter()
        .map(|row| {
            if row.len() != d {
                return Err(BaselineError::ShapeMismatch { expected: d, got: row.len() });
            }
            let xs = standardize_row(row, &model.means, &model.stds);
            let mut f = model.bias;
            for (sv, c) in model.support_vectors.iter().zip(&model.coef) {
                f += c * rbf_kernel(sv, &xs, model.gamma);
            }
            Ok(f)
        })
        .collect()
}

/// Sign of the decision value; exactly zero classifies as `+1`.
pub fn predict_svm(model: &SvmModel, rows: &[Vec<f64>]) -> Result<Vec<i8>, BaselineError> {
    Ok(decision_values(model, rows)?
        .into_iter()
        .map(|f| if f >= 0.0 { 1 } else { -1 })
        .collect())
}

impl SvmModel {
    pub fn save_json(&self, path: &Path) -> Result<(), BaselineError> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        std::fs::write(path, serde_json::to_string(self)?)?;
        Ok(())
    }

    pub fn load_json(path: &Path) -> Result<Self, BaselineError> {
        Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
    }
}
