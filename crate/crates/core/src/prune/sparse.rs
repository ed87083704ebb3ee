//! Inference over compressed-row weight layouts.
//!
//! [`SparseNet`] is built once from a (typically pruned) [`NeuralNet`] and
//! skips the multiply-accumulate for every masked weight. Dropout layers are
//! the identity at inference time and are dropped from the stack.

use super::PruneError;
use crate::matrix::Matrix;
use crate::nn::{argmax, Layer, NeuralNet};

/// CSR-style dense layer: per output neuron, the surviving columns.
struct CsrDense {
    input: usize,
    output: usize,
    row_ptr: Vec<u32>,
    cols: Vec<u32>,
    vals: Vec<f32>,
    bias: Vec<f32>,
}

/// Per output channel, the surviving `(in_channel, tap, weight)` entries.
struct SparseConv {
    in_channels: usize,
    out_channels: usize,
    kernel: usize,
    entries: Vec<Vec<(u32, u32, f32)>>,
    bias: Vec<f32>,
}

enum SparseLayer {
    Dense(CsrDense),
    Conv(SparseConv),
    ReLU,
    Softmax,
}

pub struct SparseNet {
    layers: Vec<SparseLayer>,
}

impl SparseNet {
    /// Compresses each weight layer by its mask. Weights with a zero mask are
    /// dropped from the representation entirely.
    pub fn from_net(net: &NeuralNet) -> Self {
        let mut layers = Vec::new();
        for layer in &net.layers {
            match layer {
                Layer::Dense { input, output, weights, bias, mask } => {
                    let mut row_ptr = Vec::with_capacity(output + 1);
                    let mut cols = Vec::new();
                    let mut vals = Vec::new();
                    row_ptr.push(0u32);
                    for o in 0..*output {
                        for i in 0..*input {
                            let idx = o * input + i;
                            if mask[idx] != 0.0 {
                                cols.push(i as u32);
                                vals.push(weights[idx]);
                            }
                        }
                        row_ptr.push(cols.len() as u32);
                    }
                    layers.push(SparseLayer::Dense(CsrDense {
                        input: *input,
                        output: *output,
                        row_ptr,
                        cols,
                        vals,
                        bias: bias.clone(),
                    }));
                }
                Layer::Conv1D { in_channels, out_channels, kernel, weights, bias, mask } => {
                    let mut entries = Vec::with_capacity(*out_channels);
                    for oc in 0..*out_channels {
                        let mut per_oc = Vec::new();
                        for ic in 0..*in_channels {
                            for t in 0..*kernel {
                                let idx = (oc * in_channels + ic) * kernel + t;
                                if mask[idx] != 0.0 {
                                    per_oc.push((ic as u32, t as u32, weights[idx]));
                                }
                            }
                        }
                        entries.push(per_oc);
                    }
                    layers.push(SparseLayer::Conv(SparseConv {
                        in_channels: *in_channels,
                        out_channels: *out_channels,
                        kernel: *kernel,
                        entries,
                        bias: bias.clone(),
                    }));
                }
                Layer::ReLU => layers.push(SparseLayer::ReLU),
                Layer::Dropout { .. } => {}
                Layer::Softmax => layers.push(SparseLayer::Softmax),
            }
        }
        SparseNet { layers }
    }

    /// Surviving weights across all layers.
    pub fn nonzero_weights(&self) -> usize {
        self.layers
            .iter()
            .map(|l| match l {
                SparseLayer::Dense(d) => d.vals.len(),
                SparseLayer::Conv(c) => c.entries.iter().map(Vec::len).sum(),
                _ => 0,
            })
            .sum()
    }

    pub fn forward(&self, batch: &Matrix) -> Result<Matrix, PruneError> {
        let rows = batch.rows();
        let mut cur = batch.clone();
        for layer in &self.layers {
            match layer {
                SparseLayer::Dense(d) => {
                    if cur.cols() != d.input {
                        return Err(PruneError::BadModel(format!(
                            "sparse dense layer expects {} inputs, got {}",
                            d.input,
                            cur.cols()
                        )));
                    }
                    let mut out = Matrix::zeros(rows, d.output);
                    for b in 0..rows {
                        let x = cur.row(b);
                        let y = out.row_mut(b);
                        for o in 0..d.output {
                            let lo = d.row_ptr[o] as usize;
                            let hi = d.row_ptr[o + 1] as usize;
                            let mut acc = d.bias[o];
                            for (c, v) in d.cols[lo..hi].iter().zip(&d.vals[lo..hi]) {
                                acc += v * x[*c as usize];
                            }
                            y[o] = acc;
                        }
                    }
                    cur = out;
                }
                SparseLayer::Conv(c) => {
                    if cur.cols() % c.in_channels != 0 {
                        return Err(PruneError::BadModel(format!(
                            "sparse conv input of {} values is not divisible by {} channels",
                            cur.cols(),
                            c.in_channels
                        )));
                    }
                    let len = cur.cols() / c.in_channels;
                    let pad = c.kernel / 2;
                    let mut out = Matrix::zeros(rows, c.out_channels * len);
                    for b in 0..rows {
                        let x = cur.row(b);
                        let y = out.row_mut(b);
                        for oc in 0..c.out_channels {
                            let ydst = &mut y[oc * len..(oc + 1) * len];
                            ydst.fill(c.bias[oc]);
                            for &(ic, t, w) in &c.entries[oc] {
                                let (ic, t) = (ic as usize, t as usize);
                                let xin = &x[ic * len..(ic + 1) * len];
                                let p0 = pad.saturating_sub(t);
                                let p1 = (len + pad - t).min(len);
                                for p in p0..p1 {
                                    ydst[p] += w * xin[p + t - pad];
                                }
                            }
                        }
                    }
                    cur = out;
                }
                SparseLayer::ReLU => {
                    for v in cur.data_mut() {
                        if *v < 0.0 {
                            *v = 0.0;
                        }
                    }
                }
                SparseLayer::Softmax => {
                    for b in 0..rows {
                        let row = cur.row_mut(b);
                        let max = row.iter().cloned().fold(f32::NEG_INFINITY, f32::max);
                        let mut sum = 0.0f32;
                        for v in row.iter_mut() {
                            *v = (*v - max).exp();
                            sum += *v;
                        }
                        for v in row.iter_mut() {
                            *v /= sum;
                        }
                    }
                }
            }
        }
        Ok(cur)
    }

    pub fn predict(&self, batch: &Matrix) -> Result<(Vec<usize>, Matrix), PruneError> {
        let probs = self.forward(batch)?;
        let labels = (0..probs.rows()).map(|b| argmax(probs.row(b))).collect();
        Ok((labels, probs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{LayerSpec, Mode, NeuralNet};
    use crate::prune::compute_mask;
    use rand::{rngs::StdRng, Rng, SeedableRng};

    fn random_pruned_net(rng: &mut StdRng, sparsity: f32) -> NeuralNet {
        let choice: u8 = rng.gen_range(0..2);
        let mut net = if choice == 0 {
            let input = rng.gen_range(4..20);
            let hidden = rng.gen_range(3..16);
            NeuralNet::init(
                &[
                    LayerSpec::Dense { input, output: hidden },
                    LayerSpec::ReLU,
                    LayerSpec::Dense { input: hidden, output: 3 },
                    LayerSpec::Softmax,
                ],
                rng,
            )
        } else {
            let ch = rng.gen_range(1..4);
            let len = rng.gen_range(5..12);
            NeuralNet::init(
                &[
                    LayerSpec::Conv1D { in_channels: ch, out_channels: 4, kernel: 3 },
                    LayerSpec::ReLU,
                    LayerSpec::Dense { input: 4 * len, output: 3 },
                    LayerSpec::Softmax,
                ],
                rng,
            )
        };
        for layer in &mut net.layers {
            if let Some((w, _, m)) = layer.params_mut() {
                let nm = compute_mask(w, sparsity).mask;
                for (wv, mv) in w.iter_mut().zip(&nm) {
                    *wv *= mv;
                }
                *m = nm;
            }
        }
        net
    }

    fn input_for(net: &NeuralNet, rows: usize, rng: &mut StdRng) -> Matrix {
        let cols = match &net.layers[0] {
            Layer::Dense { input, .. } => *input,
            Layer::Conv1D { in_channels, .. } => {
                // Recover the temporal length from the first dense layer.
                let dense_in = net
                    .layers
                    .iter()
                    .find_map(|l| match l {
                        Layer::Dense { input, .. } => Some(*input),
                        _ => None,
                    })
                    .unwrap();
                in_channels * (dense_in / 4)
            }
            _ => panic!("unexpected first layer"),
        };
        let mut m = Matrix::zeros(rows, cols);
        for v in m.data_mut() {
            *v = rng.gen_range(-1.0..1.0);
        }
        m
    }

    #[test]
    fn matches_dense_masked_forward_over_random_nets() {
        let mut rng = StdRng::seed_from_u64(99);
        for trial in 0..50 {
            let sparsity = [0.0f32, 0.3, 0.5, 0.9][trial % 4];
            let net = random_pruned_net(&mut rng, sparsity);
            let x = input_for(&net, 3, &mut rng);
            let (dense_out, _) = net.forward(&x, Mode::Eval, None).unwrap();
            let sparse_out = SparseNet::from_net(&net).forward(&x).unwrap();
            for (a, b) in dense_out.data().iter().zip(sparse_out.data()) {
                assert!((a - b).abs() <= 1e-6, "trial {trial}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn all_ones_mask_keeps_every_weight() {
        let mut rng = StdRng::seed_from_u64(5);
        let net = random_pruned_net(&mut rng, 0.0);
        let sparse = SparseNet::from_net(&net);
        assert_eq!(sparse.nonzero_weights(), net.weight_count());
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut rng = StdRng::seed_from_u64(6);
        let net = NeuralNet::artifact_mlp(&mut rng);
        let sparse = SparseNet::from_net(&net);
        assert!(sparse.forward(&Matrix::zeros(1, 64)).is_err());
    }
}
