//! Magnitude ranking and mask management.

use super::schedule::PruningSchedule;
use crate::nn::NeuralNet;

/// A freshly computed layer mask plus its realized sparsity.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerMask {
    pub mask: Vec<f32>,
    pub realized_sparsity: f64,
}

/// Masks out the `floor(s * n)` smallest-magnitude weights of one tensor.
/// Equal magnitudes are broken by flat index: the lower index prunes first.
pub fn compute_mask(weights: &[f32], target_sparsity: f32) -> LayerMask {
    assert!(
        (0.0..1.0).contains(&target_sparsity),
        "target sparsity must lie in [0, 1)"
    );
    let n = weights.len();
    let zeros = (target_sparsity as f64 * n as f64).floor() as usize;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| {
        weights[a]
            .abs()
            .total_cmp(&weights[b].abs())
            .then(a.cmp(&b))
    });
    let mut mask = vec![1.0f32; n];
    for &idx in &order[..zeros] {
        mask[idx] = 0.0;
    }
    LayerMask { mask, realized_sparsity: zeros as f64 / n.max(1) as f64 }
}

/// Fraction of masked-out weights in a layer's mask.
pub fn layer_sparsity(mask: &[f32]) -> f64 {
    if mask.is_empty() {
        return 0.0;
    }
    mask.iter().filter(|&&m| m == 0.0).count() as f64 / mask.len() as f64
}

/// Training-step hook: at each recomputation step of `schedule`, installs
/// fresh masks at the scheduled sparsity on every weight tensor and zeroes
/// the masked weights. Biases are never pruned. Between recomputations masks
/// stay fixed; the mask-gated gradient path keeps pruned weights at zero.
pub fn apply_pruning(net: &mut NeuralNet, schedule: &PruningSchedule, step: u64) {
    if !schedule.is_recompute_step(step) {
        return;
    }
    let target = schedule.sparsity_at(step);
    for layer in &mut net.layers {
        let Some((weights, _, mask)) = layer.params_mut() else { continue };
        let new_mask = compute_mask(weights, target).mask;
        for (w, m) in weights.iter_mut().zip(&new_mask) {
            *w *= m;
        }
        *mask = new_mask;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_the_smallest_magnitudes() {
        let m = compute_mask(&[0.5, -0.01, 0.3, 0.02], 0.5);
        assert_eq!(m.mask, vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(m.realized_sparsity, 0.5);
    }

    #[test]
    fn zero_sparsity_keeps_everything() {
        let m = compute_mask(&[0.5, -0.01, 0.3, 0.02], 0.0);
        assert_eq!(m.mask, vec![1.0; 4]);
    }

    #[test]
    fn magnitude_ties_prune_lower_flat_index_first() {
        let m = compute_mask(&[0.1, -0.1, 0.1, -0.1], 0.5);
        assert_eq!(m.mask, vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn zero_count_is_exact_floor() {
        for &n in &[10usize, 100, 4097] {
            let weights: Vec<f32> = (0..n).map(|i| ((i * 37 % 101) as f32) - 50.0).collect();
            for &s in &[0.0f32, 0.25, 0.5, 0.9] {
                let m = compute_mask(&weights, s);
                let zeros = m.mask.iter().filter(|&&v| v == 0.0).count();
                assert_eq!(zeros, (s as f64 * n as f64).floor() as usize, "n={n} s={s}");
            }
        }
    }

    #[test]
    fn pruning_hook_is_inert_before_begin_step() {
        use crate::nn::{LayerSpec, NeuralNet};
        use rand::{rngs::StdRng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(0);
        let mut net = NeuralNet::init(
            &[LayerSpec::Dense { input: 8, output: 4 }, LayerSpec::Softmax],
            &mut rng,
        );
        let schedule = PruningSchedule::new(0.0, 0.5, 100, 200, 10).unwrap();
        apply_pruning(&mut net, &schedule, 5);
        let (_, _, mask) = net.layers[0].params().unwrap();
        assert!(mask.iter().all(|&m| m == 1.0));
    }

    #[test]
    fn pruning_hook_reaches_final_sparsity_at_end_step() {
        use crate::nn::{LayerSpec, NeuralNet};
        use rand::{rngs::StdRng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(1);
        let mut net = NeuralNet::init(
            &[LayerSpec::Dense { input: 10, output: 10 }, LayerSpec::Softmax],
            &mut rng,
        );
        let schedule = PruningSchedule::new(0.0, 0.5, 0, 97, 10).unwrap();
        for step in 0..=97 {
            apply_pruning(&mut net, &schedule, step);
        }
        let (w, _, mask) = net.layers[0].params().unwrap();
        assert_eq!(mask.iter().filter(|&&m| m == 0.0).count(), 50);
        assert!(w.iter().zip(mask).all(|(&wv, &mv)| mv != 0.0 || wv == 0.0));
    }
}
