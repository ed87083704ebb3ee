//! # omad-core
//!
//! Building blocks for a small on-device-style EEG classification system:
//!
//! - [`dataset`] — the UCI `.rd` record format, corpus loading, synthetic
//!   corpora and trial-level train/test splits.
//! - [`dsp`] — notch filtering, factor-2 resampling, overlapping windows and
//!   per-window feature extraction.
//! - [`featsel`] — correlation-based redundancy pruning plus Welch t-test
//!   relevance filtering.
//! - [`nn`] — from-scratch dense / 1-D convolutional networks trained with
//!   Adam, with per-layer pruning masks baked into the parameter update path.
//! - [`prune`] — magnitude-based weight pruning: sparsity schedules, mask
//!   computation, sparse model serialization and a compressed inference path.
//! - [`baselines`] — random forest and RBF-kernel SVM reference classifiers.
//! - [`eval`] — metrics, single-threaded latency benchmarks, the sparsity
//!   sweep, and the three end-to-end experiment settings.
//!
//! Everything is deterministic given a seed and runs on plain CPU.

pub mod baselines;
pub mod dataset;
pub mod dsp;
pub mod eval;
pub mod featsel;
pub mod matrix;
pub mod nn;
pub mod prune;

pub use matrix::Matrix;
