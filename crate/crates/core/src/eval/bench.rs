//! Wall-clock latency measurement.

use std::time::Instant;

#[derive(Debug, Clone)]
pub struct LatencyStats {
    pub median_ms: f64,
    pub iqr_ms: f64,
    pub samples_ms: Vec<f64>,
    pub hardware: String,
}

/// Runs `warmup` untimed passes then `reps` timed ones, single-threaded, and
/// reports the median with the interquartile range. The closure should run
/// one forward pass over the same batch every call.
pub fn latency_bench(mut run: impl FnMut(), warmup: usize, reps: usize) -> LatencyStats {
    assert!(reps >= 1, "need at least one timed repetition");
    for _ in 0..warmup {
        run();
    }
    let mut samples_ms = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        run();
        samples_ms.push(start.elapsed().as_secs_f64() * 1e3);
    }
    let mut sorted = samples_ms.clone();
    sorted.sort_by(f64::total_cmp);
    let median_ms = percentile(&sorted, 0.5);
    let iqr_ms = percentile(&sorted, 0.75) - percentile(&sorted, 0.25);
    LatencyStats { median_ms, iqr_ms, samples_ms, hardware: hardware_descriptor() }
}

fn percentile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

/// Short description of the machine the benchmark ran on.
pub fn hardware_descriptor() -> String {
    let cpu = std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|text| {
            text.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split(':').nth(1))
                .map(|s| s.trim().to_string())
        })
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown cpu".into());
    format!("{cpu} ({} {})", std::env::consts::ARCH, std::env::consts::OS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn records_exactly_the_requested_samples() {
        let mut calls = 0usize;
        let stats = latency_bench(
            || {
                calls += 1;
                std::hint::black_box(2u64.pow(10));
            },
            5,
            30,
        );
        assert_eq!(stats.samples_ms.len(), 30);
        assert_eq!(calls, 35);
        assert!(stats.median_ms >= 0.0);
        assert!(!stats.hardware.is_empty());
    }

    #[test]
    fn percentile_interpolates() {
        let sorted = vec![1.0, 2.0, 3.0, 4.0];
        assert_eq!(percentile(&sorted, 0.5), 2.5);
        assert_eq!(percentile(&sorted, 0.0), 1.0);
        assert_eq!(percentile(&sorted, 1.0), 4.0);
    }
}
