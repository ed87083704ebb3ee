//! Binary model serialization.
//!
//! Little-endian layout:
//!
//! ```text
//! magic  b"OMAD"
//! u16    format version (currently 1)
//! u16    layer count
//! per layer:
//!   u8   kind: 0 dense, 1 conv1d, 2 relu, 3 dropout, 4 softmax
//!   dense:   u32 out, u32 in,               u8 encoding, payload, bias f32[out]
//!   conv1d:  u32 out_ch, u32 in_ch, u32 k,  u8 encoding, payload, bias f32[out_ch]
//!   dropout: u32 rate bits (f32)
//!   relu / softmax: nothing
//! ```
//!
//! Payload encoding 0 is the raw `f32` weight array. Encoding 1 is sparse: a
//! survivor bitmap of `ceil(n/8)` bytes (bit `i % 8` of byte `i / 8`, set
//! when weight `i` survives) followed by the surviving `f32` values in flat
//! index order. `Auto` picks whichever encoding is smaller per layer.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::PruneError;
use crate::nn::{Layer, NeuralNet};

pub const MAGIC: &[u8; 4] = b"OMAD";
pub const FORMAT_VERSION: u16 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Encoding {
    Auto,
    Dense,
    Sparse,
}

const KIND_DENSE: u8 = 0;
const KIND_CONV1D: u8 = 1;
const KIND_RELU: u8 = 2;
const KIND_DROPOUT: u8 = 3;
const KIND_SOFTMAX: u8 = 4;

/// Sparse payload size for `n` weights of which `nnz` survive.
pub fn sparse_payload_bytes(n: usize, nnz: usize) -> usize {
    n.div_ceil(8) + 4 * nnz
}

/// Serializes to a file, creating parent directories, and returns the exact
/// number of bytes written (the model size).
pub fn serialize(net: &NeuralNet, encoding: Encoding, path: &Path) -> Result<u64, PruneError> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    let mut out = BufWriter::new(File::create(path)?);
    let bytes = serialize_to(net, encoding, &mut out)?;
    out.flush()?;
    Ok(bytes)
}

pub fn serialize_to(
    net: &NeuralNet,
    encoding: Encoding,
    out: &mut impl Write,
) -> Result<u64, PruneError> {
    let mut written = 0u64;
    macro_rules! put {
        ($bytes:expr) => {{
            let b = $bytes;
            out.write_all(&b)?;
            written += b.len() as u64;
        }};
    }
    put!(*MAGIC);
    put!(FORMAT_VERSION.to_le_bytes());
    let count = u16::try_from(net.layers.len())
        .map_err(|_| PruneError::BadModel("too many layers".into()))?;
    put!(count.to_le_bytes());
    for layer in &net.layers {
        match layer {
            Layer::Dense { input, output, weights, bias, mask } => {
                put!([KIND_DENSE]);
                put!((*output as u32).to_le_bytes());
                put!((*input as u32).to_le_bytes());
                written += write_tensor(out, weights, mask, encoding)?;
                for v in bias {
                    put!(v.to_le_bytes());
                }
            }
            Layer::Conv1D { in_channels, out_channels, kernel, weights, bias, mask } => {
                put!([KIND_CONV1D]);
                put!((*out_channels as u32).to_le_bytes());
                put!((*in_channels as u32).to_le_bytes());
                put!((*kernel as u32).to_le_bytes());
                written += write_tensor(out, weights, mask, encoding)?;
                for v in bias {
                    put!(v.to_le_bytes());
                }
            }
            Layer::ReLU => put!([KIND_RELU]),
            Layer::Dropout { rate } => {
                put!([KIND_DROPOUT]);
                put!(rate.to_bits().to_le_bytes());
            }
            Layer::Softmax => put!([KIND_SOFTMAX]),
        }
    }
    Ok(written)
}

/// Writes encoding flag + weight payload, choosing per-layer under `Auto`.
fn write_tensor(
    out: &mut impl Write,
    weights: &[f32],
    mask: &[f32],
    encoding: Encoding,
) -> Result<u64, PruneError> {
    let n = weights.len();
    let nnz = mask.iter().filter(|&&m| m != 0.0).count();
    let sparse = match encoding {
        Encoding::Dense => false,
        Encoding::Sparse => true,
        Encoding::Auto => sparse_payload_bytes(n, nnz) < 4 * n,
    };
    let mut written = 1u64;
    if sparse {
        out.write_all(&[1u8])?;
        let mut bitmap = vec![0u8; n.div_ceil(8)];
        for (i, &m) in mask.iter().enumerate() {
            if m != 0.0 {
                bitmap[i / 8] |= 1 << (i % 8);
            }
        }
        out.write_all(&bitmap)?;
        written += bitmap.len() as u64;
        for (i, &w) in weights.iter().enumerate() {
            if mask[i] != 0.0 {
                out.write_all(&w.to_le_bytes())?;
                written += 4;
            }
        }
    } else {
        out.write_all(&[0u8])?;
        for &w in weights {
            out.write_all(&w.to_le_bytes())?;
            written += 4;
        }
    }
    Ok(written)
}

pub fn deserialize(path: &Path) -> Result<NeuralNet, PruneError> {
    deserialize_from(&mut BufReader::new(File::open(path)?))
}

pub fn deserialize_from(input: &mut impl Read) -> Result<NeuralNet, PruneError> {
    let mut magic = [0u8; 4];
    input.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(PruneError::BadModel("bad magic bytes".into()));
    }
    let version = read_u16(input)?;
    if version != FORMAT_VERSION {
        return Err(PruneError::VersionMismatch(version));
    }
    let count = read_u16(input)? as usize;
    let mut layers = Vec::with_capacity(count);
    for _ in 0..count {
        let mut kind = [0u8; 1];
        input.read_exact(&mut kind)?;
        match kind[0] {
            KIND_DENSE => {
                let output = read_u32(input)? as usize;
                let input_dim = read_u32(input)? as usize;
                let (weights, mask) = read_tensor(input, output * input_dim)?;
                let bias = read_f32_vec(input, output)?;
                layers.push(Layer::Dense { input: input_dim, output, weights, bias, mask });
            }
            KIND_CONV1D => {
                let out_channels = read_u32(input)? as usize;
                let in_channels = read_u32(input)? as usize;
                let kernel = read_u32(input)? as usize;
                let (weights, mask) = read_tensor(input, out_channels * in_channels * kernel)?;
                let bias = read_f32_vec(input, out_channels)?;
                layers.push(Layer::Conv1D {
                    in_channels,
                    out_channels,
                    kernel,
                    weights,
                    bias,
                    mask,
                });
            }
            KIND_RELU => layers.push(Layer::ReLU),
            KIND_DROPOUT => {
                let rate = f32::from_bits(read_u32(input)? as u32);
                layers.push(Layer::Dropout { rate });
            }
            KIND_SOFTMAX => layers.push(Layer::Softmax),
            other => return Err(PruneError::BadModel(format!("unknown layer kind {other}"))),
        }
    }
    Ok(NeuralNet { layers })
}

/// Reads encoding flag + payload; returns `(weights, mask)`. A dense payload
/// gets an all-ones mask.
fn read_tensor(input: &mut impl Read, n: usize) -> Result<(Vec<f32>, Vec<f32>), PruneError> {
    let mut enc = [0u8; 1];
    input.read_exact(&mut enc)?;
    match enc[0] {
        0 => Ok((read_f32_vec(input, n)?, vec![1.0; n])),
        1 => {
            let mut bitmap = vec![0u8; n.div_ceil(8)];
            input.read_exact(&mut bitmap)?;
            let mut weights = vec![0.0f32; n];
            let mut mask = vec![0.0f32; n];
            for i in 0..n {
                if bitmap[i / 8] & (1 << (i % 8)) != 0 {
                    weights[i] = read_f32(input)?;
                    mask[i] = 1.0;
                }
            }
            Ok((weights, mask))
        }
        other => Err(PruneError::BadModel(format!("unknown encoding {other}"))),
    }
}

fn read_u16(input: &mut impl Read) -> Result<u16, PruneError> {
    let mut b = [0u8; 2];
    input.read_exact(&mut b)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32(input: &mut impl Read) -> Result<u32, PruneError> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_f32(input: &mut impl Read) -> Result<f32, PruneError> {
    let mut b = [0u8; 4];
    input.read_exact(&mut b)?;
    Ok(f32::from_le_bytes(b))
}

fn read_f32_vec(input: &mut impl Read, n: usize) -> Result<Vec<f32>, PruneError> {
    (0..n).map(|_| read_f32(input)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prune::compute_mask;
    use rand::{rngs::StdRng, SeedableRng};

    fn pruned_net(seed: u64, sparsity: f32) -> NeuralNet {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut net = NeuralNet::cnn(1, 16, &mut rng);
        for layer in &mut net.layers {
            if let Some((w, _, m)) = layer.params_mut() {
                let new_mask = compute_mask(w, sparsity).mask;
                for (wv, mv) in w.iter_mut().zip(&new_mask) {
                    *wv *= mv;
                }
                *m = new_mask;
            }
        }
        net
    }

    fn effective_weights(net: &NeuralNet) -> Vec<Vec<f32>> {
        net.layers
            .iter()
            .filter_map(|l| l.params().map(|(w, _, _)| w.to_vec()))
            .collect()
    }

    #[test]
    fn round_trip_preserves_effective_weights_bit_exactly() {
        for encoding in [Encoding::Dense, Encoding::Sparse, Encoding::Auto] {
            let net = pruned_net(3, 0.5);
            let mut buf = Vec::new();
            let bytes = serialize_to(&net, encoding, &mut buf).unwrap();
            assert_eq!(bytes as usize, buf.len());
            let back = deserialize_from(&mut buf.as_slice()).unwrap();
            assert_eq!(effective_weights(&net), effective_weights(&back));
            assert_eq!(net.specs(), back.specs());
        }
    }

    #[test]
    fn sparse_beats_dense_at_half_sparsity() {
        let net = pruned_net(4, 0.5);
        let mut dense = Vec::new();
        let mut sparse = Vec::new();
        let mut auto = Vec::new();
        serialize_to(&net, Encoding::Dense, &mut dense).unwrap();
        serialize_to(&net, Encoding::Sparse, &mut sparse).unwrap();
        serialize_to(&net, Encoding::Auto, &mut auto).unwrap();
        assert!(sparse.len() < dense.len());
        assert!(auto.len() <= sparse.len());
    }

    #[test]
    fn auto_prefers_dense_for_unpruned_layers() {
        let net = pruned_net(5, 0.0);
        let mut dense = Vec::new();
        let mut auto = Vec::new();
        serialize_to(&net, Encoding::Dense, &mut dense).unwrap();
        serialize_to(&net, Encoding::Auto, &mut auto).unwrap();
        assert_eq!(dense.len(), auto.len());
    }

    #[test]
    fn payload_arithmetic_matches_the_format() {
        // 10_000 weights at 50% sparsity: 1250-byte bitmap + 5000 survivors.
        assert_eq!(sparse_payload_bytes(10_000, 5_000), 21_250);
        let dense_payload = 4 * 10_000;
        assert_eq!(dense_payload, 40_000);
    }

    #[test]
    fn rejects_bad_magic_and_version() {
        let mut bad_magic = b"NOPE".to_vec();
        bad_magic.extend_from_slice(&1u16.to_le_bytes());
        bad_magic.extend_from_slice(&0u16.to_le_bytes());
        assert!(matches!(
            deserialize_from(&mut bad_magic.as_slice()),
            Err(PruneError::BadModel(_))
        ));

        let mut bad_version = MAGIC.to_vec();
        bad_version.extend_from_slice(&9u16.to_le_bytes());
        bad_version.extend_from_slice(&0u16.to_le_bytes());
        assert!(matches!(
            deserialize_from(&mut bad_version.as_slice()),
            Err(PruneError::VersionMismatch(9))
        ));
    }

    #[test]
    fn file_size_equals_reported_bytes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("model.omad");
        let net = pruned_net(6, 0.5);
        let bytes = serialize(&net, Encoding::Auto, &path).unwrap();
        assert_eq!(bytes, std::fs::metadata(&path).unwrap().len());
        let back = deserialize(&path).unwrap();
        assert_eq!(effective_weights(&net), effective_weights(&back));
    }
}
