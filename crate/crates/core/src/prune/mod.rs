//! Magnitude-based weight pruning.
//!
//! A pruning run is driven by a [`PruningSchedule`]: between `begin_step` and
//! `end_step` the target sparsity ramps along a cubic curve, and at every
//! recomputation step each weight tensor gets a fresh mask that zeroes its
//! smallest-magnitude weights. Masks gate gradients and optimizer updates
//! (see [`crate::nn`]), so pruned weights stay zero through fine-tuning.
//!
//! Pruned models serialize to a compact binary format with a per-layer
//! bitmap + surviving-values encoding, and [`SparseNet`] runs inference that
//! skips the multiply-accumulate work for every zeroed weight.

mod mask;
mod model_io;
mod schedule;
mod sparse;

pub use mask::{apply_pruning, compute_mask, layer_sparsity, LayerMask};
pub use model_io::{
    deserialize, deserialize_from, serialize, serialize_to, sparse_payload_bytes, Encoding,
};
pub use schedule::PruningSchedule;
pub use sparse::SparseNet;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum PruneError {
    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),
    #[error("sparsity must lie in [0, 1), got {0}")]
    InvalidSparsity(f32),
    #[error("model i/o failed: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad model file: {0}")]
    BadModel(String),
    #[error("unsupported model format version {0}")]
    VersionMismatch(u16),
}
