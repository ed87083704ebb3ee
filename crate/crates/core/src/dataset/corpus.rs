//! Directory loading for `.rd` corpora.

use std::io::Read;
use std::path::{Path, PathBuf};

use super::rd::parse_rd;
use super::types::{Condition, Recording};
use super::DatasetError;

/// A file that failed to parse while loading a corpus.
#[derive(Debug)]
pub struct LoadError {
    pub path: PathBuf,
    pub error: DatasetError,
}

/// Loads every `.rd` / `.rd.gz` file under `dir` (non-recursive), optionally
/// keeping only one stimulus condition. Files that fail to parse are
/// collected, not fatal. Recordings come back sorted by
/// `(subject_id, trial_number)` regardless of directory order.
///
/// `threads` caps the worker parallelism; `1` parses sequentially.
pub fn load_corpus(
    dir: &Path,
    filter: Option<Condition>,
    threads: usize,
) -> Result<(Vec<Recording>, Vec<LoadError>), DatasetError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| {
            let name = p.file_name().and_then(|n| n.to_str()).unwrap_or("");
            name.ends_with(".rd") || name.ends_with(".rd.gz")
        })
        .collect();
    paths.sort();

    let threads = threads.max(1).min(paths.len().max(1));
    let results: Vec<(PathBuf, Result<Recording, DatasetError>)> = if threads <= 1 {
        paths.iter().map(|p| (p.clone(), load_one(p))).collect()
    } else {
        std::thread::scope(|scope| {
            let chunks: Vec<&[PathBuf]> = paths.chunks(paths.len().div_ceil(threads)).collect();
            let handles: Vec<_> = chunks
                .into_iter()
                .map(|chunk| {
                    scope.spawn(move || {
                        chunk
                            .iter()
                            .map(|p| (p.clone(), load_one(p)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
        })
    };

    let mut recordings = Vec::new();
    let mut errors = Vec::new();
    for (path, result) in results {
        match result {
            Ok(rec) => {
                if filter.is_none_or(|c| rec.condition == c) {
                    recordings.push(rec);
                }
            }
            Err(error) => {
                log::warn!("skipping {}: {error}", path.display());
                errors.push(LoadError { path, error });
            }
        }
    }
    if recordings.is_empty() {
        return Err(DatasetError::EmptyCorpus);
    }
    recordings.sort_by(|a, b| {
        (&a.subject_id, a.trial_number).cmp(&(&b.subject_id, b.trial_number))
    });
    Ok((recordings, errors))
}

fn load_one(path: &Path) -> Result<Recording, DatasetError> {
    let bytes = std::fs::read(path)?;
    let text = if path.extension().is_some_and(|e| e == "gz") {
        let mut decoder = flate2::read::GzDecoder::new(bytes.as_slice());
        let mut s = String::new();
        decoder.read_to_string(&mut s)?;
        s
    } else {
        String::from_utf8(bytes)
            .map_err(|e| DatasetError::MalformedHeader(format!("not utf-8: {e}")))?
    };
    parse_rd(&text)
}
