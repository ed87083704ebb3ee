//! Signal conditioning and feature extraction.
//!
//! Signals are `f64` microvolt sample vectors. Everything here is pure and
//! stateless: the same inputs always produce the same outputs, so windows can
//! be processed in any order or in parallel.

mod features;
mod filter;
mod resample;
mod window;

pub use features::{extract_features, FeatureMatrix, FeatureVector, BAND_EDGES, FEATURE_NAMES};
pub use filter::notch_filter;
pub use resample::resample_half;
pub use window::{make_windows, window_count, WindowConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("notch frequency {f0} Hz must lie below the Nyquist frequency {nyquist} Hz")]
    NyquistViolation { f0: f64, nyquist: f64 },
    #[error("signal of {len} samples is shorter than the window size {window}")]
    TooShort { len: usize, window: usize },
    #[error("invalid window config: {0}")]
    InvalidWindow(String),
}
