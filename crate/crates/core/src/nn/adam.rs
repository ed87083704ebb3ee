//! Adam optimizer with bias correction and mask-gated updates.

use super::net::{Gradients, NeuralNet};

#[derive(Debug, Clone, Copy)]
pub struct AdamConfig {
    pub learning_rate: f32,
    pub beta1: f32,
    pub beta2: f32,
    pub epsilon: f32,
}

impl Default for AdamConfig {
    fn default() -> Self {
        Self { learning_rate: 0.001, beta1: 0.9, beta2: 0.999, epsilon: 1e-8 }
    }
}

struct Slot {
    m_w: Vec<f32>,
    v_w: Vec<f32>,
    m_b: Vec<f32>,
    v_b: Vec<f32>,
}

/// First/second moment estimates, one slot per parameterized layer.
pub struct AdamState {
    step: u64,
    slots: Vec<Option<Slot>>,
}

impl AdamState {
    pub fn new(net: &NeuralNet) -> Self {
        let slots = net
            .layers
            .iter()
            .map(|l| {
                l.params().map(|(w, b, _)| Slot {
                    m_w: vec![0.0; w.len()],
                    v_w: vec![0.0; w.len()],
                    m_b: vec![0.0; b.len()],
                    v_b: vec![0.0; b.len()],
                })
            })
            .collect();
        Self { step: 0, slots }
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }
}

/// One Adam update. Weight updates are multiplied by the layer mask, so
/// masked weights stay exactly zero; biases are never masked.
pub fn adam_step(
    net: &mut NeuralNet,
    grads: &Gradients,
    state: &mut AdamState,
    cfg: &AdamConfig,
) {
    state.step += 1;
    let t = state.step as i32;
    let bc1 = 1.0 - cfg.beta1.powi(t);
    let bc2 = 1.0 - cfg.beta2.powi(t);
    for (idx, layer) in net.layers.iter_mut().enumerate() {
        let (Some(slot), Some((dw, db))) =
            (state.slots[idx].as_mut(), grads.per_layer[idx].as_ref())
        else {
            continue;
        };
        let Some((w, b, mask)) = layer.params_mut() else { continue };
        for i in 0..w.len() {
            let g = dw[i];
            slot.m_w[i] = cfg.beta1 * slot.m_w[i] + (1.0 - cfg.beta1) * g;
            slot.v_w[i] = cfg.beta2 * slot.v_w[i] + (1.0 - cfg.beta2) * g * g;
            let m_hat = slot.m_w[i] / bc1;
            let v_hat = slot.v_w[i] / bc2;
            let update = cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
            w[i] -= update * mask[i];
        }
        for i in 0..b.len() {
            let g = db[i];
            slot.m_b[i] = cfg.beta1 * slot.m_b[i] + (1.0 - cfg.beta1) * g;
            slot.v_b[i] = cfg.beta2 * slot.v_b[i] + (1.0 - cfg.beta2) * g * g;
            let m_hat = slot.m_b[i] / bc1;
            let v_hat = slot.v_b[i] / bc2;
            b[i] -= cfg.learning_rate * m_hat / (v_hat.sqrt() + cfg.epsilon);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{LayerSpec, NeuralNet};
    use rand::rngs::StdRng;
    use rand::SeedableRng;

    fn small_net(seed: u64) -> NeuralNet {
        let mut rng = StdRng::seed_from_u64(seed);
        NeuralNet::init(
            &[LayerSpec::Dense { input: 3, output: 2 }, LayerSpec::Softmax],
            &mut rng,
        )
    }

    fn grads_of(net: &NeuralNet, w_grad: f32) -> Gradients {
        Gradients {
            per_layer: net
                .layers
                .iter()
                .map(|l| l.params().map(|(w, b, _)| (vec![w_grad; w.len()], vec![0.0; b.len()])))
                .collect(),
        }
    }

    #[test]
    fn first_step_moves_each_weight_by_learning_rate() {
        let mut net = small_net(1);
        let before = net.layers[0].params().unwrap().0.to_vec();
        let grads = grads_of(&net, 1.0);
        let mut state = AdamState::new(&net);
        adam_step(&mut net, &grads, &mut state, &AdamConfig::default());
        let after = net.layers[0].params().unwrap().0;
        for (a, b) in after.iter().zip(&before) {
            // m_hat = 1, v_hat = 1 => update = lr / (1 + eps) ~= lr.
            assert!((b - a - 0.001).abs() < 1e-6, "step was {}", b - a);
        }
    }

    #[test]
    fn zero_gradient_leaves_parameters_unchanged() {
        let mut net = small_net(2);
        let before = net.layers[0].params().unwrap().0.to_vec();
        let grads = grads_of(&net, 0.0);
        let mut state = AdamState::new(&net);
        adam_step(&mut net, &grads, &mut state, &AdamConfig::default());
        assert_eq!(net.layers[0].params().unwrap().0, &before[..]);
    }

    #[test]
    fn opposite_gradients_give_opposite_updates() {
        let mut net = small_net(3);
        if let Some((w, _, _)) = net.layers[0].params_mut() {
            w.fill(0.5);
        }
        let mut grads = grads_of(&net, 1.0);
        if let Some((dw, _)) = grads.per_layer[0].as_mut() {
            dw[0] = 2.5;
            dw[1] = -2.5;
        }
        let mut state = AdamState::new(&net);
        adam_step(&mut net, &grads, &mut state, &AdamConfig::default());
        let w = net.layers[0].params().unwrap().0;
        let d0 = 0.5 - w[0];
        let d1 = 0.5 - w[1];
        assert!((d0 + d1).abs() < 1e-9, "expected symmetric updates, got {d0} and {d1}");
        assert!(d0 > 0.0);
    }

    #[test]
    fn masked_weights_stay_zero_through_updates() {
        let mut net = small_net(4);
        if let Some((w, _, m)) = net.layers[0].params_mut() {
            w[2] = 0.0;
            m[2] = 0.0;
        }
        let mut state = AdamState::new(&net);
        for _ in 0..25 {
            // Unmasked gradient arriving at a masked weight must not move it.
            let grads = grads_of(&net, 0.7);
            adam_step(&mut net, &grads, &mut state, &AdamConfig::default());
        }
        assert_eq!(net.layers[0].params().unwrap().0[2], 0.0);
    }
}
