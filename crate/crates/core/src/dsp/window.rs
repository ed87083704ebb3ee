//! Fixed-size overlapping windows.

use super::DspError;

/// Window size and overlap. The hop between consecutive windows is
/// `floor((1 - overlap) * window_size)`, e.g. 128 samples at 80% overlap
/// give a stride of 25.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowConfig {
    pub window_size: usize,
    pub overlap_fraction: f64,
}

impl WindowConfig {
    pub fn new(window_size: usize, overlap_fraction: f64) -> Result<Self, DspError> {
        if window_size == 0 {
            return Err(DspError::InvalidWindow("window size must be positive".into()));
        }
        if !(0.0..1.0).contains(&overlap_fraction) {
            return Err(DspError::InvalidWindow(format!(
                "overlap {overlap_fraction} must lie in [0, 1)"
            )));
        }
        let cfg = Self { window_size, overlap_fraction };
        if cfg.stride() == 0 {
            return Err(DspError::InvalidWindow("stride rounds down to zero".into()));
        }
        Ok(cfg)
    }

    pub fn stride(&self) -> usize {
        ((1.0 - self.overlap_fraction) * self.window_size as f64).floor() as usize
    }
}

/// Number of full windows in a signal of `len` samples.
pub fn window_count(len: usize, cfg: &WindowConfig) -> usize {
    if len < cfg.window_size {
        return 0;
    }
    (len - cfg.window_size) / cfg.stride() + 1
}

/// Cuts windows starting at offsets `0, stride, 2*stride, ...`. The trailing
/// partial window is dropped.
pub fn make_windows(signal: &[f64], cfg: &WindowConfig) -> Result<Vec<Vec<f64>>, DspError> {
    if signal.len() < cfg.window_size {
        return Err(DspError::TooShort { len: signal.len(), window: cfg.window_size });
    }
    let stride = cfg.stride();
    let count = window_count(signal.len(), cfg);
    let mut out = Vec::with_capacity(count);
    for w in 0..count {
        let start = w * stride;
        out.push(signal[start..start + cfg.window_size].to_vec());
    }
    Ok(out)
}
