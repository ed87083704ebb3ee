//! Canonical CSV outputs. All floating-point values print with 4 decimals.

use std::io::Write;
use std::path::Path;

use super::settings::SettingReport;
use super::sweep::SweepRow;

#[derive(Debug, Clone)]
pub struct SettingsRow {
    pub setting: String,
    pub model: String,
    pub accuracy: f64,
    pub f1: f64,
}

impl From<&SettingReport> for SettingsRow {
    fn from(r: &SettingReport) -> Self {
        SettingsRow {
            setting: r.setting.name().to_string(),
            model: r.model.to_string(),
            accuracy: r.window.accuracy,
            f1: r.window.f1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CompressionRow {
    pub model: String,
    pub pruned: bool,
    pub size_bytes: u64,
    pub latency_ms: f64,
    pub accuracy: f64,
    pub f1: f64,
}

fn create(path: &Path) -> std::io::Result<std::fs::File> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    std::fs::File::create(path)
}

pub fn write_settings_csv(path: &Path, rows: &[SettingsRow]) -> std::io::Result<()> {
    let mut f = create(path)?;
    writeln!(f, "setting,model,accuracy,f1")?;
    for r in rows {
        writeln!(f, "{},{},{:.4},{:.4}", r.setting, r.model, r.accuracy, r.f1)?;
    }
    Ok(())
}

pub fn write_compression_csv(path: &Path, rows: &[CompressionRow]) -> std::io::Result<()> {
    let mut f = create(path)?;
    writeln!(f, "model,pruned,size_bytes,latency_ms,accuracy,f1")?;
    for r in rows {
        writeln!(
            f,
            "{},{},{},{:.4},{:.4},{:.4}",
            r.model, r.pruned, r.size_bytes, r.latency_ms, r.accuracy, r.f1
        )?;
    }
    Ok(())
}

pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> std::io::Result<()> {
    let mut f = create(path)?;
    writeln!(f, "sparsity,size_bytes,latency_ms,accuracy")?;
    for r in rows {
        writeln!(
            f,
            "{:.4},{},{:.4},{:.4}",
            r.sparsity, r.size_bytes, r.latency_ms, r.accuracy
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_files_have_stable_headers_and_formatting() {
        let dir = tempfile::tempdir().unwrap();
        let sweep_path = dir.path().join("sweep.csv");
        write_sweep_csv(
            &sweep_path,
            &[SweepRow { sparsity: 0.5, size_bytes: 1024, latency_ms: 1.23456, accuracy: 0.9 }],
        )
        .unwrap();
        let text = std::fs::read_to_string(&sweep_path).unwrap();
        assert_eq!(text, "sparsity,size_bytes,latency_ms,accuracy\n0.5000,1024,1.2346,0.9000\n");

        let comp_path = dir.path().join("compression.csv");
        write_compression_csv(
            &comp_path,
            &[CompressionRow {
                model: "mlp7".into(),
                pruned: true,
                size_bytes: 2048,
                latency_ms: 0.5,
                accuracy: 0.8123456,
                f1: 0.75,
            }],
        )
        .unwrap();
        let text = std::fs::read_to_string(&comp_path).unwrap();
        assert!(text.starts_with("model,pruned,size_bytes,latency_ms,accuracy,f1\n"));
        assert!(text.contains("mlp7,true,2048,0.5000,0.8123,0.7500"));

        let settings_path = dir.path().join("settings.csv");
        write_settings_csv(
            &settings_path,
            &[SettingsRow {
                setting: "all_features_no_artifact_removal".into(),
                model: "rf".into(),
                accuracy: 0.78919,
                f1: 0.7977,
            }],
        )
        .unwrap();
        let text = std::fs::read_to_string(&settings_path).unwrap();
        assert!(text.contains("all_features_no_artifact_removal,rf,0.7892,0.7977"));
    }
}
