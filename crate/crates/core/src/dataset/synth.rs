//! Synthetic corpora.
//!
//! Two generators live here:
//!
//! - [`generate_artifact_corpus`] reproduces the artifact-collection protocol:
//!   10-second, 14-channel trials at 128 Hz where seconds 4-7 carry a scripted
//!   eye blink or eyebrow raise on top of resting-state EEG.
//! - [`generate_main_corpus`] builds a UCI-shaped control-vs-alcoholic corpus
//!   (1-second trials, 256 Hz) with class-dependent rhythms, a polarity-coded
//!   evoked transient, mains hum, and an optional fraction of trials corrupted
//!   by the same artifact signatures. It stands in for the real recordings in
//!   tests and lets the full pipeline run end to end on generated data.
//!
//! Both are bit-reproducible for a given seed.

use std::path::Path;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;

use super::types::{ArtifactKind, ArtifactRecording, Condition, Group, Recording};
use super::DatasetError;

/// Electrode names of the 14-channel headset used for artifact collection.
pub const EMOTIV_CHANNELS: [&str; 14] = [
    "AF3", "F7", "F3", "FC5", "T7", "P7", "O1", "O2", "P8", "T8", "FC6", "F4", "F8", "AF4",
];

/// 10-20-style channel names for the synthetic main corpus.
const MAIN_CHANNELS: [&str; 64] = [
    "FP1", "FP2", "F7", "F8", "AF1", "AF2", "FZ", "F4", "F3", "FC6", "FC5", "FC2", "FC1", "T8",
    "T7", "CZ", "C3", "C4", "CP5", "CP6", "CP1", "CP2", "P3", "P4", "PZ", "P8", "P7", "PO2",
    "PO1", "O2", "O1", "X", "AF7", "AF8", "F5", "F6", "FT7", "FT8", "FPZ", "FC4", "FC3", "C6",
    "C5", "F2", "F1", "TP8", "TP7", "AFZ", "CP3", "CP4", "P5", "P6", "C1", "C2", "PO7", "PO8",
    "FCZ", "POZ", "OZ", "P2", "P1", "CPZ", "ND", "Y",
];

fn is_frontal(name: &str) -> bool {
    name.starts_with("FP") || name.starts_with("AF") || name.starts_with('F')
}

#[derive(Debug, Clone)]
pub struct ArtifactCorpusConfig {
    pub subjects: usize,
    pub trials_per_kind: usize,
}

impl Default for ArtifactCorpusConfig {
    fn default() -> Self {
        // 2 trials each from 3 subjects, for both artifact kinds.
        Self { subjects: 3, trials_per_kind: 2 }
    }
}

const ARTIFACT_FS: f64 = 128.0;
const ARTIFACT_DURATION_S: f64 = 10.0;
const ARTIFACT_INTERVAL: (f64, f64) = (4.0, 7.0);

/// Generates `subjects x kinds x trials_per_kind` ten-second recordings.
/// Deterministic: equal seeds give bit-identical corpora.
pub fn generate_artifact_corpus(
    cfg: &ArtifactCorpusConfig,
    seed: u64,
) -> Vec<ArtifactRecording> {
    assert!(cfg.subjects >= 1 && cfg.trials_per_kind >= 1, "empty corpus requested");
    let mut rng = StdRng::seed_from_u64(seed);
    let n_samples = (ARTIFACT_FS * ARTIFACT_DURATION_S) as usize;
    let mut out = Vec::new();
    for s in 0..cfg.subjects {
        for kind in [ArtifactKind::EyeBlink, ArtifactKind::EyebrowRaise] {
            for trial in 0..cfg.trials_per_kind {
                let mut data = Vec::with_capacity(EMOTIV_CHANNELS.len());
                for name in EMOTIV_CHANNELS {
                    let mut channel = baseline_eeg(n_samples, ARTIFACT_FS, &mut rng);
                    let rms = rms(&channel);
                    match kind {
                        ArtifactKind::EyeBlink => {
                            let weight = if is_frontal(name) { 1.0 } else { 0.3 };
                            add_blink_pulses(
                                &mut channel,
                                ARTIFACT_FS,
                                ARTIFACT_INTERVAL,
                                5,
                                6.0 * rms * weight,
                                &mut rng,
                            );
                        }
                        ArtifactKind::EyebrowRaise => {
                            add_emg_burst(
                                &mut channel,
                                ARTIFACT_FS,
                                ARTIFACT_INTERVAL,
                                4.0 * rms,
                                &mut rng,
                            );
                        }
                    }
                    data.push(channel);
                }
                out.push(ArtifactRecording {
                    subject_id: format!("s{s:02}"),
                    artifact_kind: kind,
                    trial_number: trial as u32,
                    sample_rate_hz: ARTIFACT_FS,
                    channels: EMOTIV_CHANNELS.iter().map(|s| s.to_string()).collect(),
                    data,
                    artifact_interval_s: ARTIFACT_INTERVAL,
                });
            }
        }
    }
    out
}

/// Resting-state EEG: band-limited sinusoids (1-40 Hz) plus white noise.
fn baseline_eeg(n: usize, fs: f64, rng: &mut StdRng) -> Vec<f64> {
    // (low, high, amplitude) per rhythm component.
    let components = [(1.0, 4.0, 1.2), (4.0, 8.0, 1.0), (8.0, 13.0, 2.0), (13.0, 40.0, 0.6)];
    let parts: Vec<(f64, f64, f64)> = components
        .iter()
        .map(|&(lo, hi, amp)| {
            let freq = rng.gen_range(lo..hi);
            let phase = rng.gen_range(0.0..std::f64::consts::TAU);
            let amp = amp * rng.gen_range(0.8..1.2);
            (freq, phase, amp)
        })
        .collect();
    (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let mut v = 0.0;
            for &(freq, phase, amp) in &parts {
                v += amp * (std::f64::consts::TAU * freq * t + phase).sin();
            }
            let z: f64 = rng.sample(StandardNormal);
            v + 0.8 * z
        })
        .collect()
}

fn rms(signal: &[f64]) -> f64 {
    (signal.iter().map(|v| v * v).sum::<f64>() / signal.len() as f64).sqrt()
}

/// Overlays `count` raised-cosine transients of 200-400 ms inside `interval`.
pub(crate) fn add_blink_pulses(
    channel: &mut [f64],
    fs: f64,
    interval: (f64, f64),
    count: usize,
    peak: f64,
    rng: &mut StdRng,
) {
    let span = interval.1 - interval.0;
    for k in 0..count {
        // Spread pulse centers across the interval with a little jitter.
        let center =
            interval.0 + span * (k as f64 + 0.5) / count as f64 + rng.gen_range(-0.08..0.08);
        let width = rng.gen_range(0.2..0.4);
        let start = ((center - width / 2.0) * fs) as isize;
        let len = (width * fs) as usize;
        for j in 0..len {
            let idx = start + j as isize;
            if idx < 0 || idx as usize >= channel.len() {
                continue;
            }
            let hann =
                0.5 * (1.0 - (std::f64::consts::TAU * j as f64 / len as f64).cos());
            channel[idx as usize] += peak * hann;
        }
    }
}

/// Overlays a broadband 20-60 Hz burst spanning `interval`, scaled to the
/// requested RMS. Above 64 Hz of bandwidth nothing is representable at the
/// artifact rate, so the band is capped at the Nyquist frequency.
pub(crate) fn add_emg_burst(
    channel: &mut [f64],
    fs: f64,
    interval: (f64, f64),
    target_rms: f64,
    rng: &mut StdRng,
) {
    let lo = 20.0;
    let hi = 60.0f64.min(fs / 2.0 - 1.0);
    let freqs: Vec<(f64, f64)> = (0..20)
        .map(|_| (rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    // Sum of 20 unit sinusoids has RMS sqrt(20/2).
    let scale = target_rms / (freqs.len() as f64 / 2.0).sqrt();
    let (i0, i1) = (
        (interval.0 * fs) as usize,
        ((interval.1 * fs) as usize).min(channel.len()),
    );
    for i in i0..i1 {
        let t = i as f64 / fs;
        let mut v = 0.0;
        for &(f, p) in &freqs {
            v += (std::f64::consts::TAU * f * t + p).sin();
        }
        channel[i] += scale * v;
    }
}

// ---------------------------------------------------------------------------
// Artifact corpus persistence: one CSV per recording.
// ---------------------------------------------------------------------------

/// Writes one CSV per recording: a `#` metadata line, a `channel,t0,t1,...`
/// header, then one row per channel. File content is byte-deterministic.
pub fn save_artifact_corpus(
    recordings: &[ArtifactRecording],
    dir: &Path,
) -> Result<(), DatasetError> {
    std::fs::create_dir_all(dir)?;
    for rec in recordings {
        let name = format!("{}_{}_{}.csv", rec.subject_id, rec.artifact_kind, rec.trial_number);
        let mut text = format!(
            "# subject={} kind={} trial={} rate_hz={} interval_s={},{}\n",
            rec.subject_id,
            rec.artifact_kind,
            rec.trial_number,
            rec.sample_rate_hz,
            rec.artifact_interval_s.0,
            rec.artifact_interval_s.1
        );
        text.push_str("channel");
        for i in 0..rec.data[0].len() {
            text.push_str(&format!(",t{i}"));
        }
        text.push('\n');
        for (c, channel) in rec.channels.iter().enumerate() {
            text.push_str(channel);
            for v in &rec.data[c] {
                text.push_str(&format!(",{v}"));
            }
            text.push('\n');
        }
        std::fs::write(dir.join(name), text)?;
    }
    Ok(())
}

/// Loads a directory written by [`save_artifact_corpus`], sorted by filename.
pub fn load_artifact_corpus(dir: &Path) -> Result<Vec<ArtifactRecording>, DatasetError> {
    let mut paths: Vec<_> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for path in &paths {
        let text = std::fs::read_to_string(path)?;
        out.push(parse_artifact_csv(&text)?);
    }
    if out.is_empty() {
        return Err(DatasetError::EmptyCorpus);
    }
    Ok(out)
}

fn parse_artifact_csv(text: &str) -> Result<ArtifactRecording, DatasetError> {
    let mut lines = text.lines();
    let meta = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .ok_or_else(|| DatasetError::MalformedHeader("missing metadata line".into()))?;
    let mut subject = None;
    let mut kind = None;
    let mut trial = None;
    let mut rate = None;
    let mut interval = None;
    for pair in meta.split_whitespace() {
        let Some((key, value)) = pair.split_once('=') else { continue };
        match key {
            "subject" => subject = Some(value.to_string()),
            "kind" => kind = ArtifactKind::parse(value),
            "trial" => trial = value.parse::<u32>().ok(),
            "rate_hz" => rate = value.parse::<f64>().ok(),
            "interval_s" => {
                interval = value.split_once(',').and_then(|(a, b)| {
                    Some((a.parse::<f64>().ok()?, b.parse::<f64>().ok()?))
                });
            }
            _ => {}
        }
    }
    let (Some(subject_id), Some(artifact_kind), Some(trial_number), Some(rate), Some(interval)) =
        (subject, kind, trial, rate, interval)
    else {
        return Err(DatasetError::MalformedHeader(format!("incomplete metadata: {meta}")));
    };
    // Skip the channel,t0,... header.
    lines
        .next()
        .ok_or_else(|| DatasetError::MalformedHeader("missing column header".into()))?;
    let mut channels = Vec::new();
    let mut data = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split(',');
        channels.push(fields.next().unwrap_or("").to_string());
        let row: Result<Vec<f64>, _> = fields.map(|v| v.parse::<f64>()).collect();
        data.push(row.map_err(|e| DatasetError::MalformedHeader(format!("bad sample: {e}")))?);
    }
    Ok(ArtifactRecording {
        subject_id,
        artifact_kind,
        trial_number,
        sample_rate_hz: rate,
        channels,
        data,
        artifact_interval_s: interval,
    })
}

// ---------------------------------------------------------------------------
// Synthetic main corpus.
// ---------------------------------------------------------------------------

/// Shape and separability knobs for the synthetic control-vs-alcoholic
/// corpus. The defaults are calibrated so the full pipeline lands in the
/// accuracy ranges reported for the real data.
#[derive(Debug, Clone)]
pub struct MainCorpusConfig {
    pub subjects_per_group: usize,
    pub trials_per_subject: usize,
    pub channels: usize,
    pub sample_rate_hz: f64,
    pub duration_s: f64,
    /// Fraction of trials corrupted with an artifact overlay.
    pub artifact_fraction: f64,
    pub condition: Condition,
    /// Relative alpha-amplitude deficit of the alcoholic group.
    pub alpha_gap: f64,
    /// Amplitude of the polarity-coded evoked transient.
    pub erp_amplitude: f64,
    pub noise_sigma: f64,
    /// Log-scale spread of per-subject amplitude modulation.
    pub subject_sigma: f64,
    /// Log-scale spread of per-trial amplitude modulation.
    pub trial_sigma: f64,
}

impl Default for MainCorpusConfig {
    fn default() -> Self {
        Self {
            subjects_per_group: 10,
            trials_per_subject: 10,
            channels: 64,
            sample_rate_hz: 256.0,
            duration_s: 1.0,
            artifact_fraction: 0.2,
            condition: Condition::S1Obj,
            alpha_gap: 0.35,
            erp_amplitude: 0.9,
            noise_sigma: 1.2,
            subject_sigma: 0.15,
            trial_sigma: 0.3,
        }
    }
}

pub struct MainCorpus {
    pub recordings: Vec<Recording>,
    /// Per recording: whether an artifact overlay was injected.
    pub injected: Vec<bool>,
}

/// Generates the synthetic main corpus. Each group's subjects share class-
/// dependent signal structure: the alcoholic group has reduced alpha
/// amplitude and an inverted evoked transient. Exactly
/// `round(artifact_fraction * trials)` trials are corrupted with blink or
/// EMG overlays (class-independent).
pub fn generate_main_corpus(cfg: &MainCorpusConfig, seed: u64) -> MainCorpus {
    assert!(cfg.channels >= 1 && cfg.channels <= MAIN_CHANNELS.len());
    assert!((0.0..=1.0).contains(&cfg.artifact_fraction));
    let mut rng = StdRng::seed_from_u64(seed);
    let n_samples = (cfg.sample_rate_hz * cfg.duration_s) as usize;
    let fs = cfg.sample_rate_hz;
    let channel_names: Vec<String> =
        MAIN_CHANNELS[..cfg.channels].iter().map(|s| s.to_string()).collect();

    let total_trials = 2 * cfg.subjects_per_group * cfg.trials_per_subject;
    let n_injected = (cfg.artifact_fraction * total_trials as f64).round() as usize;
    let mut inject_order: Vec<usize> = (0..total_trials).collect();
    inject_order.shuffle(&mut rng);
    let injected_set: std::collections::HashSet<usize> =
        inject_order.into_iter().take(n_injected).collect();

    let mut recordings = Vec::with_capacity(total_trials);
    let mut injected = Vec::with_capacity(total_trials);
    let mut global_trial = 0usize;
    for (g, group) in [Group::Control, Group::Alcoholic].into_iter().enumerate() {
        for s in 0..cfg.subjects_per_group {
            let subject_id = format!(
                "co2{}{:07}",
                if group == Group::Alcoholic { 'a' } else { 'c' },
                g * 1000 + s
            );
            let z: f64 = rng.sample(StandardNormal);
            let subject_mod = (cfg.subject_sigma * z).exp();
            let chan_gain: Vec<f64> =
                (0..cfg.channels).map(|_| rng.gen_range(0.7..1.3)).collect();
            for trial in 0..cfg.trials_per_subject {
                let z: f64 = rng.sample(StandardNormal);
                let trial_mod = (cfg.trial_sigma * z).exp();
                let amp = subject_mod * trial_mod;
                let alpha_freq = rng.gen_range(8.5..12.0);
                let theta_freq = rng.gen_range(4.0..7.0);
                let beta_freq = rng.gen_range(14.0..28.0);
                let z: f64 = rng.sample(StandardNormal);
                let erp_t0 = 0.45 + 0.03 * z;
                let group_alpha = match group {
                    Group::Control => 1.0,
                    Group::Alcoholic => 1.0 - cfg.alpha_gap,
                };
                let group_beta = match group {
                    Group::Control => 1.0,
                    Group::Alcoholic => 1.2,
                };
                let polarity = match group {
                    Group::Control => 1.0,
                    Group::Alcoholic => -1.0,
                };
                let mut data = Vec::with_capacity(cfg.channels);
                for gain in chan_gain.iter().take(cfg.channels) {
                    let phases: Vec<f64> =
                        (0..4).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
                    let channel: Vec<f64> = (0..n_samples)
                        .map(|i| {
                            let t = i as f64 / fs;
                            let tau = std::f64::consts::TAU;
                            let mut v = 2.2
                                * group_alpha
                                * amp
                                * gain
                                * (tau * alpha_freq * t + phases[0]).sin();
                            v += 0.8 * amp * gain * (tau * theta_freq * t + phases[1]).sin();
                            v += 0.5
                                * group_beta
                                * amp
                                * gain
                                * (tau * beta_freq * t + phases[2]).sin();
                            // Mains hum, identical across classes; the notch
                            // filter is expected to take it out.
                            v += 1.0 * (tau * 60.0 * t + phases[3]).sin();
                            // Polarity-coded evoked transient.
                            let dt = t - erp_t0;
                            v += cfg.erp_amplitude
                                * polarity
                                * amp
                                * gain
                                * (-dt * dt / (2.0 * 0.08 * 0.08)).exp()
                                * (tau * 5.0 * dt).cos();
                            let z: f64 = rng.sample(StandardNormal);
                            v + cfg.noise_sigma * z
                        })
                        .collect();
                    data.push(channel);
                }

                let inject = injected_set.contains(&global_trial);
                if inject {
                    let blink = rng.gen_bool(0.5);
                    for (c, channel) in data.iter_mut().enumerate() {
                        let level = rms(channel);
                        if blink {
                            let weight =
                                if is_frontal(&channel_names[c]) { 1.0 } else { 0.35 };
                            add_blink_pulses(
                                channel,
                                fs,
                                (0.05, cfg.duration_s - 0.05),
                                2,
                                5.5 * level * weight,
                                &mut rng,
                            );
                        } else {
                            add_emg_burst(
                                channel,
                                fs,
                                (0.05, cfg.duration_s - 0.05),
                                4.0 * level,
                                &mut rng,
                            );
                        }
                    }
                }

                recordings.push(Recording {
                    subject_id: subject_id.clone(),
                    group,
                    condition: cfg.condition,
                    trial_number: trial as u32,
                    sample_rate_hz: fs,
                    channels: channel_names.clone(),
                    data,
                    declared_trials: cfg.trials_per_subject as u32,
                    declared_samples: n_samples as u32,
                });
                injected.push(inject);
                global_trial += 1;
            }
        }
    }
    MainCorpus { recordings, injected }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg_rms(signal: &[f64], fs: f64, from_s: f64, to_s: f64) -> f64 {
        let (a, b) = ((from_s * fs) as usize, (to_s * fs) as usize);
        rms(&signal[a..b])
    }

    #[test]
    fn corpus_has_the_protocol_shape() {
        let cfg = ArtifactCorpusConfig { subjects: 3, trials_per_kind: 2 };
        let corpus = generate_artifact_corpus(&cfg, 7);
        assert_eq!(corpus.len(), 12); // 3 subjects x 2 kinds x 2 trials
        for rec in &corpus {
            assert_eq!(rec.channels.len(), 14);
            assert_eq!(rec.data.len(), 14);
            for channel in &rec.data {
                assert_eq!(channel.len(), 1280);
            }
            assert_eq!(rec.artifact_interval_s, (4.0, 7.0));
            assert_eq!(rec.sample_rate_hz, 128.0);
        }
    }

    #[test]
    fn equal_seeds_give_identical_corpora() {
        let cfg = ArtifactCorpusConfig::default();
        let a = generate_artifact_corpus(&cfg, 99);
        let b = generate_artifact_corpus(&cfg, 99);
        assert_eq!(a, b);
        let c = generate_artifact_corpus(&cfg, 100);
        assert_ne!(a, c);
    }

    #[test]
    fn artifact_interval_is_louder_than_rest() {
        let corpus = generate_artifact_corpus(&ArtifactCorpusConfig::default(), 11);
        for rec in &corpus {
            for channel in &rec.data {
                let rest = seg_rms(channel, rec.sample_rate_hz, 0.0, 3.0);
                let burst = seg_rms(channel, rec.sample_rate_hz, 4.0, 7.0);
                assert!(
                    burst > rest,
                    "{} {}: burst {burst} not above rest {rest}",
                    rec.subject_id,
                    rec.artifact_kind
                );
            }
        }
    }

    #[test]
    fn blink_peaks_reach_five_times_baseline_on_frontal_channels() {
        let corpus = generate_artifact_corpus(&ArtifactCorpusConfig::default(), 13);
        for rec in corpus.iter().filter(|r| r.artifact_kind == ArtifactKind::EyeBlink) {
            for (c, name) in rec.channels.iter().enumerate() {
                if !is_frontal(name) {
                    continue;
                }
                let rest = seg_rms(&rec.data[c], rec.sample_rate_hz, 0.0, 3.0);
                let peak = rec.data[c]
                    [(4.0 * rec.sample_rate_hz) as usize..(7.0 * rec.sample_rate_hz) as usize]
                    .iter()
                    .cloned()
                    .fold(f64::MIN, f64::max);
                assert!(peak >= 5.0 * rest, "{name}: peak {peak} < 5x rest {rest}");
            }
        }
    }

    #[test]
    fn corpus_round_trips_through_csv() {
        let dir = tempfile::tempdir().unwrap();
        let corpus =
            generate_artifact_corpus(&ArtifactCorpusConfig { subjects: 1, trials_per_kind: 1 }, 5);
        save_artifact_corpus(&corpus, dir.path()).unwrap();
        let back = load_artifact_corpus(dir.path()).unwrap();
        assert_eq!(corpus.len(), back.len());
        for rec in &corpus {
            let found = back
                .iter()
                .find(|r| {
                    r.subject_id == rec.subject_id
                        && r.artifact_kind == rec.artifact_kind
                        && r.trial_number == rec.trial_number
                })
                .expect("recording missing after round trip");
            assert_eq!(found, rec);
        }
    }

    #[test]
    fn saved_corpus_is_byte_deterministic() {
        let cfg = ArtifactCorpusConfig { subjects: 1, trials_per_kind: 1 };
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        save_artifact_corpus(&generate_artifact_corpus(&cfg, 21), dir_a.path()).unwrap();
        save_artifact_corpus(&generate_artifact_corpus(&cfg, 21), dir_b.path()).unwrap();
        for entry in std::fs::read_dir(dir_a.path()).unwrap() {
            let path_a = entry.unwrap().path();
            let path_b = dir_b.path().join(path_a.file_name().unwrap());
            assert_eq!(
                std::fs::read(&path_a).unwrap(),
                std::fs::read(&path_b).unwrap(),
                "{path_a:?} differs"
            );
        }
    }

    #[test]
    fn main_corpus_shape_and_determinism() {
        let cfg = MainCorpusConfig {
            subjects_per_group: 2,
            trials_per_subject: 3,
            channels: 8,
            ..MainCorpusConfig::default()
        };
        let a = generate_main_corpus(&cfg, 3);
        assert_eq!(a.recordings.len(), 12);
        assert_eq!(a.injected.len(), 12);
        assert_eq!(
            a.injected.iter().filter(|&&i| i).count(),
            (0.2f64 * 12.0).round() as usize
        );
        for rec in &a.recordings {
            assert_eq!(rec.channels.len(), 8);
            assert_eq!(rec.samples_per_channel(), 256);
        }
        let b = generate_main_corpus(&cfg, 3);
        assert_eq!(a.recordings, b.recordings);
    }

    #[test]
    fn main_corpus_has_balanced_groups() {
        let cfg = MainCorpusConfig {
            subjects_per_group: 3,
            trials_per_subject: 2,
            channels: 4,
            ..MainCorpusConfig::default()
        };
        let corpus = generate_main_corpus(&cfg, 8);
        let alcoholic =
            corpus.recordings.iter().filter(|r| r.group == Group::Alcoholic).count();
        assert_eq!(alcoholic, 6);
        for rec in &corpus.recordings {
            let expect = if rec.group == Group::Alcoholic { 'a' } else { 'c' };
            assert_eq!(rec.subject_id.as_bytes()[3] as char, expect);
        }
    }
}
