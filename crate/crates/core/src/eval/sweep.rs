//! Size / latency / accuracy across a range of target sparsities.

use rand::rngs::StdRng;
use rand::SeedableRng;

use super::bench::latency_bench;
use super::EvalError;
use crate::matrix::Matrix;
use crate::nn::{steps_per_epoch, train, LayerSpec, NeuralNet, TrainConfig};
use crate::prune::{
    apply_pruning, serialize_to, Encoding, PruningSchedule, SparseNet,
};

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub train: TrainConfig,
    /// Mask recomputation period of the pruning schedule.
    pub frequency: u64,
    pub bench_warmup: usize,
    pub bench_reps: usize,
    /// Rows per benchmark minibatch.
    pub bench_batch: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            train: TrainConfig::default(),
            frequency: 100,
            bench_warmup: 5,
            bench_reps: 30,
            bench_batch: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sparsity: f32,
    pub size_bytes: u64,
    pub latency_ms: f64,
    pub accuracy: f64,
}

/// For each requested sparsity: train the architecture with that final
/// sparsity (same initialization every time), serialize with automatic
/// per-layer encoding, benchmark one minibatch on the compressed inference
/// path, and evaluate held-out accuracy. Errors propagate per row without
/// stopping the sweep; rows come back one-to-one with the requested
/// sparsities, in order.
#[allow(clippy::too_many_arguments)]
pub fn sparsity_sweep(
    arch: &[LayerSpec],
    x_train: &Matrix,
    y_train: &[usize],
    x_test: &Matrix,
    y_test: &[usize],
    sparsities: &[f32],
    cfg: &SweepConfig,
) -> Vec<(f32, Result<SweepRow, EvalError>)> {
    assert!(
        sparsities.windows(2).all(|w| w[0] < w[1]),
        "sparsities must be sorted ascending"
    );
    assert!(
        sparsities.iter().all(|&s| (0.0..=0.95).contains(&s)),
        "sparsities must lie in [0, 0.95]"
    );
    sparsities
        .iter()
        .map(|&sparsity| (sparsity, sweep_point(arch, x_train, y_train, x_test, y_test, sparsity, cfg)))
        .collect()
}

fn sweep_point(
    arch: &[LayerSpec],
    x_train: &Matrix,
    y_train: &[usize],
    x_test: &Matrix,
    y_test: &[usize],
    sparsity: f32,
    cfg: &SweepConfig,
) -> Result<SweepRow, EvalError> {
    let mut rng = StdRng::seed_from_u64(cfg.train.seed);
    let mut net = NeuralNet::init(arch, &mut rng);
    let total_steps =
        steps_per_epoch(x_train.rows(), cfg.train.batch_size) * cfg.train.epochs as u64;
    if sparsity > 0.0 {
        let schedule = PruningSchedule::for_run(sparsity, total_steps, cfg.frequency)?;
        train(&mut net, x_train, y_train, &cfg.train, |step, net| {
            apply_pruning(net, &schedule, step)
        })?;
    } else {
        train(&mut net, x_train, y_train, &cfg.train, |_, _| {})?;
    }

    let mut bytes = Vec::new();
    let size_bytes = serialize_to(&net, Encoding::Auto, &mut bytes)?;

    let sparse = SparseNet::from_net(&net);
    let batch = bench_batch(x_test, cfg.bench_batch);
    let stats = latency_bench(
        || {
            sparse.forward(&batch).expect("bench forward");
        },
        cfg.bench_warmup,
        cfg.bench_reps,
    );

    let (predicted, _) = sparse.predict(x_test)?;
    let correct = predicted.iter().zip(y_test).filter(|(a, b)| a == b).count();
    Ok(SweepRow {
        sparsity,
        size_bytes,
        latency_ms: stats.median_ms,
        accuracy: correct as f64 / y_test.len() as f64,
    })
}

/// A fixed-size benchmark batch cycled out of the test rows.
pub(crate) fn bench_batch(x: &Matrix, rows: usize) -> Matrix {
    let indices: Vec<usize> = (0..rows).map(|i| i % x.rows()).collect();
    x.gather_rows(&indices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn toy(n: usize, dim: usize, seed: u64) -> (Matrix, Vec<usize>) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for i in 0..n {
            let label = i % 2;
            let c = if label == 0 { -1.0f32 } else { 1.0 };
            rows.push((0..dim).map(|_| c + 0.5 * rng.gen::<f32>()).collect());
            labels.push(label);
        }
        (Matrix::from_rows(&rows), labels)
    }

    #[test]
    fn rows_are_one_to_one_with_sparsities_and_sizes_decrease() {
        let (x_train, y_train) = toy(64, 16, 1);
        let (x_test, y_test) = toy(32, 16, 2);
        let arch = [
            LayerSpec::Dense { input: 16, output: 64 },
            LayerSpec::ReLU,
            LayerSpec::Dense { input: 64, output: 2 },
            LayerSpec::Softmax,
        ];
        let cfg = SweepConfig {
            train: TrainConfig { epochs: 4, seed: 3, ..TrainConfig::default() },
            bench_reps: 3,
            bench_warmup: 1,
            ..SweepConfig::default()
        };
        let sparsities = [0.0, 0.5, 0.9];
        let rows = sparsity_sweep(&arch, &x_train, &y_train, &x_test, &y_test, &sparsities, &cfg);
        assert_eq!(rows.len(), 3);
        let ok: Vec<&SweepRow> = rows.iter().map(|(_, r)| r.as_ref().unwrap()).collect();
        for (row, &s) in ok.iter().zip(&sparsities) {
            assert_eq!(row.sparsity, s);
            assert!(row.accuracy.is_finite() && row.latency_ms.is_finite());
        }
        assert!(ok[0].size_bytes > ok[1].size_bytes);
        assert!(ok[1].size_bytes > ok[2].size_bytes);
    }

    #[test]
    #[should_panic]
    fn unsorted_sparsities_are_rejected() {
        let (x, y) = toy(16, 4, 1);
        let arch = [LayerSpec::Dense { input: 4, output: 2 }, LayerSpec::Softmax];
        sparsity_sweep(&arch, &x, &y, &x, &y, &[0.5, 0.1], &SweepConfig::default());
    }
}
