//! Second-order IIR (biquad) notch filter.

use super::DspError;

/// Applies a causal biquad notch centered at `f0` with bandwidth `f0 / q`.
/// Coefficients follow the standard audio-cookbook band-stop design, which
/// has exactly unit gain at DC and at Nyquist.
pub fn notch_filter(signal: &[f64], fs: f64, f0: f64, q: f64) -> Result<Vec<f64>, DspError> {
    assert!(fs > 0.0 && q > 0.0, "sample rate and Q must be positive");
    if f0 <= 0.0 || f0 >= fs / 2.0 {
        return Err(DspError::NyquistViolation { f0, nyquist: fs / 2.0 });
    }
    let w0 = 2.0 * std::f64::consts::PI * f0 / fs;
    let alpha = w0.sin() / (2.0 * q);
    let cos_w0 = w0.cos();

    let a0 = 1.0 + alpha;
    let b0 = 1.0 / a0;
    let b1 = -2.0 * cos_w0 / a0;
    let b2 = 1.0 / a0;
    let a1 = -2.0 * cos_w0 / a0;
    let a2 = (1.0 - alpha) / a0;

    let mut out = Vec::with_capacity(signal.len());
    let (mut x1, mut x2, mut y1, mut y2) = (0.0f64, 0.0, 0.0, 0.0);
    for &x in signal {
        let y = b0 * x + b1 * x1 + b2 * x2 - a1 * y1 - a2 * y2;
        x2 = x1;
        x1 = x;
        y2 = y1;
        y1 = y;
        out.push(y);
    }
    Ok(out)
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
    fn dc_passes_at_unity_gain() {
        let input = vec![3.25f64; 4096];
        let out = notch_filter(&input, 256.0, 60.0, 30.0).unwrap();
        // After the transient settles the output converges to the input.
        for &v in &out[3072..] {
            assert!((v - 3.25).abs() < 1e-9, "got {v}");
        }
    }

    #[test]
    fn attenuates_the_notch_frequency_by_30_db() {
        let fs = 256.0;
        let input = sine(60.0, fs, 4096);
        let out = notch_filter(&input, fs, 60.0, 30.0).unwrap();
        // Skip the first 0.5 s of transient.
        let skip = (0.5 * fs) as usize;
        let ratio = rms(&out[skip..]) / rms(&input[skip..]);
        let db = 20.0 * ratio.log10();
        assert!(db <= -30.0, "attenuation only {db:.1} dB");
    }

    #[test]
    fn passes_in_band_signal_within_one_db() {
        let fs = 256.0;
        let input = sine(10.0, fs, 4096);
        let out = notch_filter(&input, fs, 60.0, 30.0).unwrap();
        let skip = (0.5 * fs) as usize;
        let db = 20.0 * (rms(&out[skip..]) / rms(&input[skip..])).log10();
        assert!(db.abs() <= 1.0, "in-band change {db:.2} dB");
    }

    #[test]
    fn filter_is_linear_in_amplitude() {
        let fs = 256.0;
        let input: Vec<f64> = sine(17.3, fs, 512)
            .iter()
            .zip(sine(49.0, fs, 512))
            .map(|(a, b)| a + 0.5 * b)
            .collect();
        let scaled: Vec<f64> = input.iter().map(|v| v * 7.5).collect();
        let a = notch_filter(&scaled, fs, 60.0, 30.0).unwrap();
        let b = notch_filter(&input, fs, 60.0, 30.0).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let err = (x - y * 7.5).abs() / y.abs().max(1e-3);
            assert!(err < 1e-9, "relative error {err}");
        }
    }

    #[test]
    fn rejects_notch_at_or_above_nyquist() {
        assert!(matches!(
            notch_filter(&[0.0; 8], 256.0, 128.0, 30.0),
            Err(DspError::NyquistViolation { .. })
        ));
        assert!(notch_filter(&[0.0; 8], 256.0, 127.9, 30.0).is_ok());
    }

    #[test]
    fn output_length_matches_input() {
        let out = notch_filter(&[1.0; 37], 256.0, 60.0, 30.0).unwrap();
        assert_eq!(out.len(), 37);
    }
}
