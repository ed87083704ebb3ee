//! Deterministic mini-batch training loop.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use super::adam::{adam_step, AdamConfig, AdamState};
use super::net::{argmax, cross_entropy, Mode, NeuralNet};
use super::NnError;
use crate::matrix::Matrix;

/// Training hyperparameters. Defaults: 150 epochs of Adam at 0.001 with
/// batches of 64 and dropout 0.4 (the dropout rate only applies to
/// architectures built with dropout layers).
#[derive(Debug, Clone)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f32,
    pub batch_size: usize,
    pub dropout: f32,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { epochs: 150, learning_rate: 0.001, batch_size: 64, dropout: 0.4, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub loss: f32,
    pub accuracy: f32,
}

/// Trains `net` in place. Each epoch reshuffles the examples with the seeded
/// RNG and walks them in mini-batches (the trailing partial batch is kept).
/// `on_step` runs after every optimizer step with the global step count; the
/// pruning schedule hooks in here.
///
/// Single-threaded and fully deterministic for a given seed.
pub fn train(
    net: &mut NeuralNet,
    x: &Matrix,
    y: &[usize],
    cfg: &TrainConfig,
    mut on_step: impl FnMut(u64, &mut NeuralNet),
) -> Result<Vec<EpochStats>, NnError> {
    if x.rows() == 0 {
        return Err(NnError::EmptyTrainSet);
    }
    assert_eq!(x.rows(), y.len(), "one label per training row");
    let first = y[0];
    if y.iter().all(|&l| l == first) {
        return Err(NnError::SingleClass);
    }
    assert!(cfg.batch_size > 0 && cfg.epochs > 0, "epochs and batch size must be positive");

    let mut rng = StdRng::seed_from_u64(cfg.seed);
    let adam_cfg = AdamConfig { learning_rate: cfg.learning_rate, ..AdamConfig::default() };
    let mut adam = AdamState::new(net);
    let mut indices: Vec<usize> = (0..x.rows()).collect();
    let mut log = Vec::with_capacity(cfg.epochs);

    for epoch in 0..cfg.epochs {
        indices.shuffle(&mut rng);
        let mut loss_sum = 0.0f64;
        let mut correct = 0usize;
        for chunk in indices.chunks(cfg.batch_size) {
            let xb = x.gather_rows(chunk);
            let yb: Vec<usize> = chunk.iter().map(|&i| y[i]).collect();
            let (probs, cache) = net.forward(&xb, Mode::Train, Some(&mut rng))?;
            let loss = cross_entropy(&probs, &yb);
            if !loss.is_finite() {
                return Err(NnError::Diverged { epoch, log });
            }
            loss_sum += loss as f64 * yb.len() as f64;
            for (b, &label) in yb.iter().enumerate() {
                if argmax(probs.row(b)) == label {
                    correct += 1;
                }
            }
            let grads = net.backward(&cache, &yb)?;
            adam_step(net, &grads, &mut adam, &adam_cfg);
            on_step(adam.step_count(), net);
        }
        log.push(EpochStats {
            epoch,
            loss: (loss_sum / x.rows() as f64) as f32,
            accuracy: correct as f32 / x.rows() as f32,
        });
    }
    Ok(log)
}

/// Optimizer steps one epoch takes; used to derive pruning schedules.
pub fn steps_per_epoch(rows: usize, batch_size: usize) -> u64 {
    (rows as u64 + batch_size as u64 - 1) / batch_size as u64
}
