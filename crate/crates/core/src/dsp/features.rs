//! Per-window features and the feature table fed to selection and the
//! statistical classifiers.

use std::io::{Read, Write};
use std::path::Path;

/// Names of the per-window features, in output order.
pub const FEATURE_NAMES: [&str; 12] = [
    "mean",
    "variance",
    "std",
    "rms",
    "min",
    "max",
    "zero_crossings",
    "delta_power",
    "theta_power",
    "alpha_power",
    "beta_power",
    "gamma_power",
];

/// EEG band edges in Hz, `[low, high)`: delta, theta, alpha, beta, gamma.
pub const BAND_EDGES: [(f64, f64); 5] =
    [(0.5, 4.0), (4.0, 8.0), (8.0, 13.0), (13.0, 30.0), (30.0, 45.0)];

/// One window's feature values, aligned with [`FEATURE_NAMES`].
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector(pub Vec<f64>);

impl FeatureVector {
    pub fn get(&self, name: &str) -> f64 {
        let idx = FEATURE_NAMES.iter().position(|&n| n == name).expect("unknown feature");
        self.0[idx]
    }
}

/// Time-domain statistics plus band powers from a rectangular-window
/// periodogram (`|X(k)|^2 / (N * fs)` summed over each band's bins, DC and
/// Nyquist excluded by the band edges).
pub fn extract_features(window: &[f64], fs: f64) -> FeatureVector {
    let n = window.len();
    assert!(n >= 8, "window of {n} samples is too short for features");
    let nf = n as f64;

    let mean = window.iter().sum::<f64>() / nf;
    let variance = window.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / nf;
    let std = variance.sqrt();
    let rms = (window.iter().map(|v| v * v).sum::<f64>() / nf).sqrt();
    let min = window.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let zero_crossings = window
        .windows(2)
        .filter(|pair| pair[0] * pair[1] < 0.0)
        .count() as f64;

    let spectrum = periodogram(window, fs);
    let mut band_powers = [0.0f64; 5];
    for (k, &p) in spectrum.iter().enumerate() {
        let freq = k as f64 * fs / nf;
        for (b, &(lo, hi)) in BAND_EDGES.iter().enumerate() {
            if freq >= lo && freq < hi {
                band_powers[b] += p;
            }
        }
    }

    let mut values = vec![mean, variance, std, rms, min, max, zero_crossings];
    values.extend_from_slice(&band_powers);
    FeatureVector(values)
}

/// One-sided periodogram over bins `0..=N/2`.
pub(crate) fn periodogram(window: &[f64], fs: f64) -> Vec<f64> {
    let n = window.len();
    let nf = n as f64;
    let mut out = Vec::with_capacity(n / 2 + 1);
    for k in 0..=n / 2 {
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let w = -2.0 * std::f64::consts::PI * k as f64 / nf;
        for (i, &x) in window.iter().enumerate() {
            let (s, c) = (w * i as f64).sin_cos();
            re += x * c;
            im += x * s;
        }
        out.push((re * re + im * im) / (nf * fs));
    }
    out
}

/// Feature table: one row per window, columns named `<channel>_<feature>`,
/// with class and artifact labels riding along for export.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub group_labels: Vec<Option<String>>,
    pub artifact_labels: Vec<Option<bool>>,
}

impl FeatureMatrix {
    pub fn new(names: Vec<String>) -> Self {
        Self { names, rows: Vec::new(), group_labels: Vec::new(), artifact_labels: Vec::new() }
    }

    pub fn push_row(&mut self, row: Vec<f64>, group: Option<String>, artifact: Option<bool>) {
        assert_eq!(row.len(), self.names.len(), "row width mismatch");
        self.rows.push(row);
        self.group_labels.push(group);
        self.artifact_labels.push(artifact);
    }

    pub fn column(&self, idx: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[idx]).collect()
    }

    /// Keeps only the named columns, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self {
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| indices.iter().map(|&i| r[i]).collect())
                .collect(),
            group_labels: self.group_labels.clone(),
            artifact_labels: self.artifact_labels.clone(),
        }
    }

    /// CSV export: header of feature names plus trailing `group_label` and
    /// `artifact_label` columns. Values print with full precision so a
    /// re-import reproduces the table.
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header: Vec<&str> = self.names.iter().map(String::as_str).collect();
        header.push("group_label");
        header.push("artifact_label");
        w.write_record(&header)?;
        for (i, row) in self.rows.iter().enumerate() {
            let mut record: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            record.push(self.group_labels[i].clone().unwrap_or_default());
            record.push(match self.artifact_labels[i] {
                Some(true) => "true".into(),
                Some(false) => "false".into(),
                None => String::new(),
            });
            w.write_record(&record)?;
        }
        w.flush()
    }

    pub fn save_csv(&self, path: &Path) -> std::io::Result<()> {
        if let Some(parent) = path.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)?;
            }
        }
        let mut file = std::fs::File::create(path)?;
        self.write_csv(&mut file)
    }

    pub fn read_csv(input: &mut impl Read) -> std::io::Result<Self> {
        let mut reader = csv::Reader::from_reader(input);
        let header = reader.headers()?.clone();
        let cols = header.len();
        if cols < 2 {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                "feature CSV needs label columns",
            ));
        }
        let names: Vec<String> = header.iter().take(cols - 2).map(String::from).collect();
        let mut matrix = FeatureMatrix::new(names);
        for record in reader.records() {
            let record = record?;
            let row: Vec<f64> = record
                .iter()
                .take(cols - 2)
                .map(|v| v.parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))?;
            let group = match &record[cols - 2] {
                "" => None,
                s => Some(s.to_string()),
            };
            let artifact = match &record[cols - 1] {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                other => {
                    return Err(std::io::Error::new(
                        std::io::ErrorKind::InvalidData,
                        format!("bad artifact label {other:?}"),
                    ))
                }
            };
            matrix.push_row(row, group, artifact);
        }
        Ok(matrix)
    }

    pub fn load_csv(path: &Path) -> std::io::Result<Self> {
        Self::read_csv(&mut std::fs::File::open(path)?)
    }
}
