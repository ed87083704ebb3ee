//! Reference statistical classifiers: a random forest of Gini-split CART
//! trees and an RBF-kernel SVM trained with sequential minimal optimization.
//! Both consume extracted feature rows, never raw windows.

mod forest;
mod svm;

pub use forest::{predict_forest, train_forest, Forest, ForestConfig};
pub use svm::{decision_values, predict_svm, rbf_kernel, train_svm, SvmConfig, SvmModel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BaselineError {
    #[error("degenerate training data: {0}")]
    DegenerateData(String),
    #[error("shape mismatch: expected {expected} features, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("labels must be -1 or +1, found {0}")]
    BadLabel(i8),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad model file: {0}")]
    BadFile(#[from] serde_json::Error),
}
