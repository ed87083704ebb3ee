//! Layer kinds and their parameter tensors.

use rand::rngs::StdRng;
use rand::Rng;

/// Declarative layer description used to build a [`crate::nn::NeuralNet`].
#[derive(Debug, Clone, PartialEq)]
pub enum LayerSpec {
    Dense { input: usize, output: usize },
    /// 1-D convolution, stride 1, "same" zero padding. Kernel length is
    /// almost always 3.
    Conv1D { in_channels: usize, out_channels: usize, kernel: usize },
    ReLU,
    Dropout { rate: f32 },
    Softmax,
}

/// A layer with its parameters. Weight tensors are stored flat; every weight
/// tensor has a same-shaped 0/1 mask and the stored weights are kept equal to
/// `w ⊙ mask` at all times.
#[derive(Debug, Clone)]
pub enum Layer {
    Dense {
        input: usize,
        output: usize,
        /// `output × input`, row-major.
        weights: Vec<f32>,
        bias: Vec<f32>,
        mask: Vec<f32>,
    },
    Conv1D {
        in_channels: usize,
        out_channels: usize,
        kernel: usize,
        /// `out_channels × in_channels × kernel`, flattened in that order.
        weights: Vec<f32>,
        bias: Vec<f32>,
        mask: Vec<f32>,
    },
    ReLU,
    Dropout { rate: f32 },
    Softmax,
}

impl Layer {
    /// He-style uniform init scaled by fan-in; biases start at zero and masks
    /// at all-ones.
    pub fn init(spec: &LayerSpec, rng: &mut StdRng) -> Self {
        match *spec {
            LayerSpec::Dense { input, output } => {
                let bound = (6.0 / input as f32).sqrt();
                let weights = (0..input * output)
                    .map(|_| rng.gen_range(-bound..bound))
                    .collect();
                Layer::Dense {
                    input,
                    output,
                    weights,
                    bias: vec![0.0; output],
                    mask: vec![1.0; input * output],
                }
            }
            LayerSpec::Conv1D { in_channels, out_channels, kernel } => {
                let fan_in = (in_channels * kernel) as f32;
                let bound = (6.0 / fan_in).sqrt();
                let n = out_channels * in_channels * kernel;
                let weights = (0..n).map(|_| rng.gen_range(-bound..bound)).collect();
                Layer::Conv1D {
                    in_channels,
                    out_channels,
                    kernel,
                    weights,
                    bias: vec![0.0; out_channels],
                    mask: vec![1.0; n],
                }
            }
            LayerSpec::ReLU => Layer::ReLU,
            LayerSpec::Dropout { rate } => {
                assert!((0.0..1.0).contains(&rate), "dropout rate must be in [0,1)");
                Layer::Dropout { rate }
            }
            LayerSpec::Softmax => Layer::Softmax,
        }
    }

    pub fn spec(&self) -> LayerSpec {
        match self {
            Layer::Dense { input, output, .. } => {
                LayerSpec::Dense { input: *input, output: *output }
            }
            Layer::Conv1D { in_channels, out_channels, kernel, .. } => LayerSpec::Conv1D {
                in_channels: *in_channels,
                out_channels: *out_channels,
                kernel: *kernel,
            },
            Layer::ReLU => LayerSpec::ReLU,
            Layer::Dropout { rate } => LayerSpec::Dropout { rate: *rate },
            Layer::Softmax => LayerSpec::Softmax,
        }
    }

    /// Weight/mask/bias views for layers that carry parameters.
    pub fn params(&self) -> Option<(&[f32], &[f32], &[f32])> {
        match self {
            Layer::Dense { weights, bias, mask, .. }
            | Layer::Conv1D { weights, bias, mask, .. } => Some((weights, bias, mask)),
            _ => None,
        }
    }

    pub fn params_mut(&mut self) -> Option<(&mut Vec<f32>, &mut Vec<f32>, &mut Vec<f32>)> {
        match self {
            Layer::Dense { weights, bias, mask, .. }
            | Layer::Conv1D { weights, bias, mask, .. } => Some((weights, bias, mask)),
            _ => None,
        }
    }

    pub fn weight_count(&self) -> usize {
        self.params().map_or(0, |(w, _, _)| w.len())
    }
}
