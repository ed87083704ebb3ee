//! Scratch calibration harness (not part of the final suite).
use omad_core::dataset::{generate_artifact_corpus, generate_main_corpus, ArtifactCorpusConfig, MainCorpusConfig};
use omad_core::eval::{run_setting, train_artifact_detector, DspConfig, Setting, SettingsConfig};
use omad_core::nn::TrainConfig;
use std::time::Instant;

#[test]
#[ignore]
fn calibrate() {
    let t0 = Instant::now();
    let corpus_cfg = MainCorpusConfig {
        subjects_per_group: 10,
        trials_per_subject: 8,
        channels: 8,
        ..MainCorpusConfig::default()
    };
    let corpus = generate_main_corpus(&corpus_cfg, 424242);
    eprintln!("[{:?}] corpus: {} recordings, {} injected", t0.elapsed(), corpus.recordings.len(),
        corpus.injected.iter().filter(|&&i| i).count());

    let art_corpus = generate_artifact_corpus(&ArtifactCorpusConfig::default(), 99);
    let dsp = DspConfig::default();

    for seed in [1u64, 2, 3] {
        let det_cfg = TrainConfig { epochs: 30, seed, ..TrainConfig::default() };
        let det = train_artifact_detector(&art_corpus, &dsp, &det_cfg, None).unwrap();
        eprintln!("[{:?}] seed {seed}: detector acc {:.4} f1 {:.4} ({} train, {} test windows)",
            t0.elapsed(), det.metrics.accuracy, det.metrics.f1, det.train_windows, det.test_windows);

        let cfg = SettingsConfig {
            train: TrainConfig { epochs: 40, seed, ..TrainConfig::default() },
            ..SettingsConfig::default()
        };
        for setting in [Setting::AllFeaturesNoRemoval, Setting::AllFeaturesWithRemoval, Setting::SelectedFeaturesWithRemoval] {
            let reports = run_setting(setting, &corpus.recordings, Some(&det.net), &cfg, seed).unwrap();
            for r in &reports {
                eprintln!("[{:?}] seed {seed} {:44} {:5} window acc {:.4} f1 {:.4} | trial acc {:.4} | removed {}/{}",
                    t0.elapsed(), setting.name(), r.model, r.window.accuracy, r.window.f1, r.trial.accuracy, r.removed_groups, r.total_groups);
            }
        }
    }
}
