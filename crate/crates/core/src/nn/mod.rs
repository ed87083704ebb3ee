//! From-scratch neural networks: dense and 1-D convolutional layers, dropout,
//! softmax cross-entropy, Adam, and a deterministic mini-batch training loop.
//!
//! Every weight tensor carries a binary pruning mask of the same shape. The
//! effective weight is always `w ⊙ mask`: masks gate gradients and optimizer
//! updates, so a pruned weight stays exactly zero through any amount of
//! fine-tuning.

mod adam;
mod layer;
mod net;
mod train;

pub use adam::{adam_step, AdamConfig, AdamState};
pub use layer::{Layer, LayerSpec};
pub use net::{argmax, cross_entropy, ForwardCache, Gradients, Mode, NeuralNet};
pub use train::{steps_per_epoch, train, EpochStats, TrainConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NnError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("stale forward cache: {0}")]
    StaleCache(String),
    #[error("dropout in Train mode requires an RNG")]
    MissingRng,
    #[error("training set is empty")]
    EmptyTrainSet,
    #[error("training set must contain at least two classes")]
    SingleClass,
    #[error("training diverged at epoch {epoch} (non-finite loss)")]
    Diverged { epoch: usize, log: Vec<EpochStats> },
}
