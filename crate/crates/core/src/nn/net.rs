//! Network container, forward/backward passes and the cross-entropy loss.

use rand::rngs::StdRng;
use rand::Rng;

use super::layer::{Layer, LayerSpec};
use super::NnError;
use crate::matrix::Matrix;

pub const PROB_CLIP: f32 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Train,
    Eval,
}

/// A feed-forward stack of layers ending in a softmax.
#[derive(Debug, Clone)]
pub struct NeuralNet {
    pub layers: Vec<Layer>,
}

/// Per-layer state captured during a Train-mode forward pass.
enum StepCache {
    /// The input the layer saw (Dense, Conv1D, ReLU).
    Input(Matrix),
    /// Dropout keep-mask already scaled by 1/(1-rate).
    DropoutMask(Matrix),
    /// Softmax output probabilities.
    Probs(Matrix),
}

pub struct ForwardCache {
    mode: Mode,
    batch_rows: usize,
    steps: Vec<StepCache>,
}

/// Per-layer weight/bias gradients, aligned with `NeuralNet::layers`.
pub struct Gradients {
    pub per_layer: Vec<Option<(Vec<f32>, Vec<f32>)>>,
}

impl NeuralNet {
    /// Builds and initializes a network from layer specs. The final layer must
    /// be a softmax.
    pub fn init(specs: &[LayerSpec], rng: &mut StdRng) -> Self {
        assert!(
            matches!(specs.last(), Some(LayerSpec::Softmax)),
            "network must end in a softmax layer"
        );
        NeuralNet { layers: specs.iter().map(|s| Layer::init(s, rng)).collect() }
    }

    /// The 3-weight-layer artifact detector: 128 -> 64 -> 32 -> 2.
    pub fn artifact_mlp(rng: &mut StdRng) -> Self {
        Self::init(
            &[
                LayerSpec::Dense { input: 128, output: 64 },
                LayerSpec::ReLU,
                LayerSpec::Dense { input: 64, output: 32 },
                LayerSpec::ReLU,
                LayerSpec::Dense { input: 32, output: 2 },
                LayerSpec::Softmax,
            ],
            rng,
        )
    }

    /// The 7-weight-layer classifier with dropout after every hidden layer:
    /// input -> 512 -> 256 -> 128 -> 64 -> 32 -> 16 -> 2.
    pub fn main_mlp(input: usize, dropout: f32, rng: &mut StdRng) -> Self {
        let widths = [512usize, 256, 128, 64, 32, 16];
        let mut specs = Vec::new();
        let mut prev = input;
        for &w in &widths {
            specs.push(LayerSpec::Dense { input: prev, output: w });
            specs.push(LayerSpec::ReLU);
            specs.push(LayerSpec::Dropout { rate: dropout });
            prev = w;
        }
        specs.push(LayerSpec::Dense { input: prev, output: 2 });
        specs.push(LayerSpec::Softmax);
        Self::init(&specs, rng)
    }

    /// Two 1-D conv layers (16 and 32 filters, kernel 3) followed by two
    /// dense layers. `length` is the temporal length of one input window.
    pub fn cnn(in_channels: usize, length: usize, rng: &mut StdRng) -> Self {
        Self::init(
            &[
                LayerSpec::Conv1D { in_channels, out_channels: 16, kernel: 3 },
                LayerSpec::ReLU,
                LayerSpec::Conv1D { in_channels: 16, out_channels: 32, kernel: 3 },
                LayerSpec::ReLU,
                LayerSpec::Dense { input: 32 * length, output: 64 },
                LayerSpec::ReLU,
                LayerSpec::Dense { input: 64, output: 2 },
                LayerSpec::Softmax,
            ],
            rng,
        )
    }

    pub fn specs(&self) -> Vec<LayerSpec> {
        self.layers.iter().map(|l| l.spec()).collect()
    }

    pub fn weight_count(&self) -> usize {
        self.layers.iter().map(|l| l.weight_count()).sum()
    }

    /// Forward pass. In `Train` mode dropout is active (inverted scaling, so
    /// `Eval` needs no rescaling) and an RNG must be supplied when the net
    /// contains dropout layers.
    pub fn forward(
        &self,
        batch: &Matrix,
        mode: Mode,
        mut rng: Option<&mut StdRng>,
    ) -> Result<(Matrix, ForwardCache), NnError> {
        let rows = batch.rows();
        let mut cur = batch.clone();
        let mut steps = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            match layer {
                Layer::Dense { input, output, weights, bias, .. } => {
                    if cur.cols() != *input {
                        return Err(NnError::ShapeMismatch(format!(
                            "dense layer expects {} inputs, got {}",
                            input,
                            cur.cols()
                        )));
                    }
                    let mut out = Matrix::zeros(rows, *output);
                    for b in 0..rows {
                        let x = cur.row(b);
                        let y = out.row_mut(b);
                        for o in 0..*output {
                            let wrow = &weights[o * input..(o + 1) * input];
                            let mut acc = bias[o];
                            for (w, xi) in wrow.iter().zip(x) {
                                acc += w * xi;
                            }
                            y[o] = acc;
                        }
                    }
                    steps.push(StepCache::Input(cur));
                    cur = out;
                }
                Layer::Conv1D { in_channels, out_channels, kernel, weights, bias, .. } => {
                    if cur.cols() % in_channels != 0 {
                        return Err(NnError::ShapeMismatch(format!(
                            "conv1d input of {} values is not divisible by {} channels",
                            cur.cols(),
                            in_channels
                        )));
                    }
                    let len = cur.cols() / in_channels;
                    let pad = kernel / 2;
                    let mut out = Matrix::zeros(rows, out_channels * len);
                    for b in 0..rows {
                        let x = cur.row(b);
                        let y = out.row_mut(b);
                        for oc in 0..*out_channels {
                            let ydst = &mut y[oc * len..(oc + 1) * len];
                            ydst.fill(bias[oc]);
                            for ic in 0..*in_channels {
                                let xin = &x[ic * len..(ic + 1) * len];
                                for t in 0..*kernel {
                                    let w = weights[(oc * in_channels + ic) * kernel + t];
                                    if w == 0.0 {
                                        continue;
                                    }
                                    // y[p] += w * x[p + t - pad]
                                    let (p0, p1) = conv_range(len, t, pad);
                                    for p in p0..p1 {
                                        ydst[p] += w * xin[p + t - pad];
                                    }
                                }
                            }
                        }
                    }
                    steps.push(StepCache::Input(cur));
                    cur = out;
                }
                Layer::ReLU => {
                    let mut out = cur.clone();
                    for v in out.data_mut() {
                        if *v < 0.0 {
                            *v = 0.0;
                        }
                    }
                    steps.push(StepCache::Input(cur));
                    cur = out;
                }
                Layer::Dropout { rate } => {
                    if mode == Mode::Eval || *rate == 0.0 {
                        // Identity in Eval mode.
                        steps.push(StepCache::DropoutMask(Matrix::zeros(0, 0)));
                    } else {
                        let rng = rng.as_deref_mut().ok_or(NnError::MissingRng)?;
                        let scale = 1.0 / (1.0 - rate);
                        let mut mask = Matrix::zeros(rows, cur.cols());
                        for v in mask.data_mut() {
                            *v = if rng.gen::<f32>() < *rate { 0.0 } else { scale };
                        }
                        for (v, m) in cur.data_mut().iter_mut().zip(mask.data()) {
                            *v *= m;
                        }
                        steps.push(StepCache::DropoutMask(mask));
                    }
                }
                Layer::Softmax => {
                    for b in 0..rows {
                        softmax_in_place(cur.row_mut(b));
                    }
                    steps.push(StepCache::Probs(cur.clone()));
                }
            }
        }
        let cache = ForwardCache { mode, batch_rows: rows, steps };
        Ok((cur, cache))
    }

    /// Backpropagation through the cached forward pass. The loss is the mean
    /// categorical cross-entropy of the softmax output against `labels`.
    /// Gradients of masked-out weights are exactly zero.
    pub fn backward(
        &self,
        cache: &ForwardCache,
        labels: &[usize],
    ) -> Result<Gradients, NnError> {
        if cache.mode != Mode::Train {
            return Err(NnError::StaleCache("forward pass was not run in Train mode".into()));
        }
        if cache.steps.len() != self.layers.len() {
            return Err(NnError::StaleCache("cache does not match network depth".into()));
        }
        if labels.len() != cache.batch_rows {
            return Err(NnError::ShapeMismatch(format!(
                "{} labels for a batch of {} rows",
                labels.len(),
                cache.batch_rows
            )));
        }
        let rows = cache.batch_rows;
        let inv_rows = 1.0 / rows as f32;
        let mut per_layer: Vec<Option<(Vec<f32>, Vec<f32>)>> =
            self.layers.iter().map(|_| None).collect();

        // d(mean CE)/d(pre-softmax logits) = (P - onehot) / batch.
        let mut grad: Option<Matrix> = None;
        for (idx, layer) in self.layers.iter().enumerate().rev() {
            match (layer, &cache.steps[idx]) {
                (Layer::Softmax, StepCache::Probs(probs)) => {
                    let mut g = probs.clone();
                    for b in 0..rows {
                        let r = g.row_mut(b);
                        r[labels[b]] -= 1.0;
                        for v in r.iter_mut() {
                            *v *= inv_rows;
                        }
                    }
                    grad = Some(g);
                }
                (Layer::Dense { input, output, weights, mask, .. }, StepCache::Input(x)) => {
                    let dy = grad.as_ref().expect("gradient flows from the softmax");
                    let mut dw = vec![0.0f32; weights.len()];
                    let mut db = vec![0.0f32; *output];
                    let mut dx = Matrix::zeros(rows, *input);
                    for b in 0..rows {
                        let dyr = dy.row(b);
                        let xr = x.row(b);
                        let dxr = dx.row_mut(b);
                        for o in 0..*output {
                            let d = dyr[o];
                            if d == 0.0 {
                                continue;
                            }
                            db[o] += d;
                            let dwrow = &mut dw[o * input..(o + 1) * input];
                            let wrow = &weights[o * input..(o + 1) * input];
                            for i in 0..*input {
                                dwrow[i] += d * xr[i];
                                dxr[i] += d * wrow[i];
                            }
                        }
                    }
                    for (g, m) in dw.iter_mut().zip(mask) {
                        *g *= m;
                    }
                    per_layer[idx] = Some((dw, db));
                    grad = Some(dx);
                }
                (
                    Layer::Conv1D { in_channels, out_channels, kernel, weights, mask, .. },
                    StepCache::Input(x),
                ) => {
                    let dy = grad.as_ref().expect("gradient flows from the softmax");
                    let len = x.cols() / in_channels;
                    let pad = kernel / 2;
                    let mut dw = vec![0.0f32; weights.len()];
                    let mut db = vec![0.0f32; *out_channels];
                    let mut dx = Matrix::zeros(rows, x.cols());
                    for b in 0..rows {
                        let dyr = dy.row(b);
                        let xr = x.row(b);
                        let dxr = dx.row_mut(b);
                        for oc in 0..*out_channels {
                            let dysl = &dyr[oc * len..(oc + 1) * len];
                            db[oc] += dysl.iter().sum::<f32>();
                            for ic in 0..*in_channels {
                                let xin = &xr[ic * len..(ic + 1) * len];
                                let dxi = &mut dxr[ic * len..(ic + 1) * len];
                                for t in 0..*kernel {
                                    let widx = (oc * in_channels + ic) * kernel + t;
                                    let w = weights[widx];
                                    let (p0, p1) = conv_range(len, t, pad);
                                    let mut acc = 0.0f32;
                                    for p in p0..p1 {
                                        let dyp = dysl[p];
                                        acc += dyp * xin[p + t - pad];
                                        dxi[p + t - pad] += dyp * w;
                                    }
                                    dw[widx] += acc;
                                }
                            }
                        }
                    }
                    for (g, m) in dw.iter_mut().zip(mask) {
                        *g *= m;
                    }
                    per_layer[idx] = Some((dw, db));
                    grad = Some(dx);
                }
                (Layer::ReLU, StepCache::Input(x)) => {
                    let g = grad.as_mut().expect("gradient flows from the softmax");
                    for (gv, xv) in g.data_mut().iter_mut().zip(x.data()) {
                        if *xv <= 0.0 {
                            *gv = 0.0;
                        }
                    }
                }
                (Layer::Dropout { .. }, StepCache::DropoutMask(mask)) => {
                    if mask.rows() > 0 {
                        let g = grad.as_mut().expect("gradient flows from the softmax");
                        for (gv, m) in g.data_mut().iter_mut().zip(mask.data()) {
                            *gv *= m;
                        }
                    }
                }
                _ => {
                    return Err(NnError::StaleCache(
                        "cache entries do not line up with layer kinds".into(),
                    ))
                }
            }
        }
        Ok(Gradients { per_layer })
    }

    /// Eval-mode forward followed by an argmax. Ties resolve to the lower
    /// class index.
    pub fn predict(&self, batch: &Matrix) -> Result<(Vec<usize>, Matrix), NnError> {
        let (probs, _) = self.forward(batch, Mode::Eval, None)?;
        let labels = (0..probs.rows()).map(|b| argmax(probs.row(b))).collect();
        Ok((labels, probs))
    }
}

/// Highest-probability class; ties break toward the lower index.
pub fn argmax(row: &[f32]) -> usize {
    let mut best = 0;
    for (i, &v) in row.iter().enumerate().skip(1) {
        if v > row[best] {
            best = i;
        }
    }
    best
}

fn softmax_in_place(row: &mut [f32]) {
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

/// Valid output range `[p0, p1)` such that `p + t - pad` stays inside the
/// input for a stride-1 "same" convolution.
fn conv_range(len: usize, t: usize, pad: usize) -> (usize, usize) {
    let p0 = pad.saturating_sub(t);
    let p1 = (len + pad - t).min(len);
    (p0, p1)
}

/// Mean categorical cross-entropy. Probabilities are clipped to
/// `[PROB_CLIP, 1]`, so the loss is finite for any probability input. For two
/// classes this equals binary cross-entropy.
pub fn cross_entropy(probs: &Matrix, labels: &[usize]) -> f32 {
    assert_eq!(probs.rows(), labels.len(), "one label per row");
    let mut total = 0.0f64;
    for (b, &label) in labels.iter().enumerate() {
        let p = probs.row(b)[label].max(PROB_CLIP).min(1.0);
        total -= (p as f64).ln();
    }
    (total / labels.len() as f64) as f32
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng(seed: u64) -> StdRng {
        StdRng::seed_from_u64(seed)
    }

    #[test]
    fn softmax_of_equal_logits_is_uniform() {
        let net = NeuralNet { layers: vec![Layer::Softmax] };
        let (out, _) = net
            .forward(&Matrix::from_rows(&[vec![0.0, 0.0]]), Mode::Eval, None)
            .unwrap();
        assert!((out.row(0)[0] - 0.5).abs() < 1e-7);
        assert!((out.row(0)[1] - 0.5).abs() < 1e-7);
    }

    #[test]
    fn softmax_rows_sum_to_one() {
        let net = NeuralNet { layers: vec![Layer::Softmax] };
        let batch = Matrix::from_rows(&[vec![3.0, -2.0, 80.0], vec![-50.0, 0.0, 1.0]]);
        let (out, _) = net.forward(&batch, Mode::Eval, None).unwrap();
        for b in 0..2 {
            let s: f32 = out.row(b).iter().sum();
            assert!((s - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn identity_dense_layer_passes_input_through() {
        let mut w = vec![0.0f32; 9];
        for i in 0..3 {
            w[i * 3 + i] = 1.0;
        }
        let net = NeuralNet {
            layers: vec![
                Layer::Dense { input: 3, output: 3, weights: w, bias: vec![0.0; 3], mask: vec![1.0; 9] },
                Layer::Softmax,
            ],
        };
        let x = Matrix::from_rows(&[vec![0.3, -1.5, 2.0]]);
        let (_, cache) = net.forward(&x, Mode::Eval, None).unwrap();
        // Pre-softmax activation equals the input: check via the softmax cache.
        match &cache.steps[1] {
            StepCache::Probs(p) => {
                let expect = {
                    let mut r = vec![0.3f32, -1.5, 2.0];
                    softmax_in_place(&mut r);
                    r
                };
                assert_eq!(p.row(0), &expect[..]);
            }
            _ => panic!("softmax cache missing"),
        }
    }

    #[test]
    fn eval_forward_is_deterministic_with_dropout_layers() {
        let mut r = rng(3);
        let net = NeuralNet::main_mlp(16, 0.4, &mut r);
        let x = Matrix::from_rows(&[(0..16).map(|i| i as f32 / 16.0).collect::<Vec<_>>()]);
        let (a, _) = net.forward(&x, Mode::Eval, None).unwrap();
        let (b, _) = net.forward(&x, Mode::Eval, None).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn train_mode_dropout_requires_rng() {
        let net = NeuralNet {
            layers: vec![Layer::Dropout { rate: 0.5 }, Layer::Softmax],
        };
        let x = Matrix::from_rows(&[vec![1.0, 1.0]]);
        assert!(matches!(
            net.forward(&x, Mode::Train, None),
            Err(NnError::MissingRng)
        ));
    }

    #[test]
    fn conv_same_padding_preserves_length() {
        let mut r = rng(5);
        let net = NeuralNet::init(
            &[
                LayerSpec::Conv1D { in_channels: 2, out_channels: 4, kernel: 3 },
                LayerSpec::Softmax,
            ],
            &mut r,
        );
        let x = Matrix::zeros(3, 2 * 10);
        let (out, _) = net.forward(&x, Mode::Eval, None).unwrap();
        assert_eq!(out.cols(), 4 * 10);
    }

    #[test]
    fn shape_mismatch_is_reported() {
        let mut r = rng(7);
        let net = NeuralNet::artifact_mlp(&mut r);
        let x = Matrix::zeros(1, 64);
        assert!(matches!(
            net.forward(&x, Mode::Eval, None),
            Err(NnError::ShapeMismatch(_))
        ));
    }

    #[test]
    fn cross_entropy_matches_hand_values() {
        // Perfect prediction.
        let p = Matrix::from_rows(&[vec![1.0, 0.0]]);
        assert!(cross_entropy(&p, &[0]) <= 1e-11);
        // Uniform prediction: ln 2.
        let p = Matrix::from_rows(&[vec![0.5, 0.5]]);
        assert!((cross_entropy(&p, &[1]) - std::f32::consts::LN_2).abs() < 1e-6);
        // Batch mean of per-row losses.
        let p = Matrix::from_rows(&[vec![0.5, 0.5], vec![0.25, 0.75]]);
        let expect = (0.5f32.ln() + 0.75f32.ln()) / -2.0;
        assert!((cross_entropy(&p, &[0, 1]) - expect).abs() < 1e-6);
    }

    #[test]
    fn masked_weight_gradient_is_exactly_zero() {
        let mut r = rng(11);
        let mut net = NeuralNet::init(
            &[LayerSpec::Dense { input: 4, output: 3 }, LayerSpec::Softmax],
            &mut r,
        );
        if let Some((w, _, m)) = net.layers[0].params_mut() {
            m[5] = 0.0;
            w[5] = 0.0;
        }
        let x = Matrix::from_rows(&[vec![1.0, 2.0, 3.0, 4.0]]);
        let (_, cache) = net.forward(&x, Mode::Train, Some(&mut r)).unwrap();
        let grads = net.backward(&cache, &[1]).unwrap();
        let (dw, _) = grads.per_layer[0].as_ref().unwrap();
        assert_eq!(dw[5], 0.0);
        assert!(dw.iter().any(|&g| g != 0.0));
    }

    #[test]
    fn zero_input_gives_zero_weight_gradient() {
        let mut r = rng(13);
        let net = NeuralNet::init(
            &[LayerSpec::Dense { input: 4, output: 2 }, LayerSpec::Softmax],
            &mut r,
        );
        let x = Matrix::zeros(2, 4);
        let (_, cache) = net.forward(&x, Mode::Train, Some(&mut r)).unwrap();
        let grads = net.backward(&cache, &[0, 0]).unwrap();
        let (dw, db) = grads.per_layer[0].as_ref().unwrap();
        assert!(dw.iter().all(|&g| g == 0.0));
        assert!(db.iter().any(|&g| g != 0.0));
    }

    #[test]
    fn backward_rejects_eval_cache() {
        let mut r = rng(17);
        let net = NeuralNet::artifact_mlp(&mut r);
        let x = Matrix::zeros(1, 128);
        let (_, cache) = net.forward(&x, Mode::Eval, None).unwrap();
        assert!(matches!(
            net.backward(&cache, &[0]),
            Err(NnError::StaleCache(_))
        ));
    }

    #[test]
    fn predict_breaks_ties_toward_lower_index() {
        assert_eq!(argmax(&[0.5, 0.5]), 0);
        assert_eq!(argmax(&[0.9, 0.1]), 0);
        assert_eq!(argmax(&[0.1, 0.2, 0.7]), 2);
    }

    #[test]
    fn predict_returns_one_label_per_row() {
        let mut r = rng(19);
        let net = NeuralNet::artifact_mlp(&mut r);
        let x = Matrix::zeros(5, 128);
        let (labels, probs) = net.predict(&x).unwrap();
        assert_eq!(labels.len(), 5);
        assert_eq!(probs.rows(), 5);
    }
}
