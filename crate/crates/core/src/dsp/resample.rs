//! Factor-2 decimation with an anti-aliasing lowpass.

/// Number of taps of the anti-aliasing FIR. 63 taps with a Hamming window
/// give ~53 dB of stopband rejection with a transition band narrow enough
/// for the 256 -> 128 Hz bridge.
const TAPS: usize = 63;

/// Halves the sample rate: lowpass at 0.45x the new Nyquist, then keep every
/// other sample. Output length is `floor(len / 2)`.
///
/// The lowpass is a zero-phase windowed-sinc applied with edge replication,
/// so constant signals pass through exactly.
pub fn resample_half(signal: &[f64], _fs: f64) -> Vec<f64> {
    assert!(signal.len() >= 2, "need at least two samples to decimate");
    let filtered = lowpass(signal);
    let out_len = signal.len() / 2;
    (0..out_len).map(|i| filtered[2 * i]).collect()
}

fn lowpass(signal: &[f64]) -> Vec<f64> {
    // Cutoff 0.45 * (fs/2 / 2) => 0.225 cycles/sample.
    let cutoff = 0.225f64;
    let taps = design_lowpass(cutoff);
    let half = TAPS / 2;
    let n = signal.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc = 0.0f64;
        for (j, &h) in taps.iter().enumerate() {
            // Centered kernel with edge replication outside the signal.
            let k = i as isize + j as isize - half as isize;
            let k = k.clamp(0, n as isize - 1) as usize;
            acc += h * signal[k];
        }
        out.push(acc);
    }
    out
}

/// Hamming-windowed sinc, normalized to exactly unit DC gain.
fn design_lowpass(cutoff: f64) -> Vec<f64> {
    let m = (TAPS - 1) as f64;
    let mut taps: Vec<f64> = (0..TAPS)
        .map(|i| {
            let x = i as f64 - m / 2.0;
            let sinc = if x == 0.0 {
                2.0 * cutoff
            } else {
                (2.0 * std::f64::consts::PI * cutoff * x).sin() / (std::f64::consts::PI * x)
            };
            let window = 0.54 - 0.46 * (2.0 * std::f64::consts::PI * i as f64 / m).cos();
            sinc * window
        })
        .collect();
    let sum: f64 = taps.iter().sum();
    for t in &mut taps {
        *t /= sum;
    }
    taps
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rms(signal: &[f64]) -> f64 {
        (signal.iter().map(|v| v * v).sum::<f64>() / signal.len() as f64).sqrt()
    }

    fn sine(freq: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * freq * i as f64 / fs).sin())
            .collect()
    }

    #[test]
    fn constant_signal_stays_constant_at_half_length() {
        let out = resample_half(&[4.2; 100], 256.0);
        assert_eq!(out.len(), 50);
        for &v in &out {
            assert!((v - 4.2).abs() / 4.2 < 0.01, "got {v}");
        }
    }

    #[test]
    fn passband_sine_keeps_its_amplitude() {
        let fs = 256.0;
        let n = 2048;
        let out = resample_half(&sine(5.0, fs, n), fs);
        let expect = sine(5.0, 128.0, n / 2);
        // Compare steady-state RMS away from the edges.
        let a = rms(&out[64..out.len() - 64]);
        let b = rms(&expect[64..expect.len() - 64]);
        assert!((a / b - 1.0).abs() < 0.02, "amplitude ratio {}", a / b);
    }

    #[test]
    fn aliasing_band_is_suppressed() {
        let fs = 256.0;
        let input = sine(120.0, fs, 2048);
        let out = resample_half(&input, fs);
        assert!(rms(&out) / rms(&input) < 0.05, "ratio {}", rms(&out) / rms(&input));
    }

    #[test]
    fn odd_length_truncates() {
        assert_eq!(resample_half(&[1.0; 101], 256.0).len(), 50);
    }
}
