//! EEG corpora: the UCI `.rd` record format, synthetic corpus generators and
//! labeled trial-level train/test splits.

mod corpus;
mod rd;
mod split;
mod synth;
mod types;

pub use corpus::{load_corpus, LoadError};
pub use rd::{parse_rd, to_rd_text};
pub use split::{split, split_trial_keys};
pub use synth::{
    generate_artifact_corpus, generate_main_corpus, load_artifact_corpus, save_artifact_corpus,
    ArtifactCorpusConfig, MainCorpus, MainCorpusConfig, EMOTIV_CHANNELS,
};
pub use types::{
    ArtifactKind, ArtifactRecording, Condition, Group, Recording, TrialKey, WindowedExample,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("bad data row at line {line}: {detail}")]
    RowArity { line: usize, detail: String },
    #[error("sample index gap in channel {channel}: expected {expected}, found {found}")]
    IndexGap { channel: String, expected: usize, found: String },
    #[error("subject id {0:?} does not encode a group ('a' or 'c' as the 4th letter)")]
    UnknownGroup(String),
    #[error("no recordings could be parsed from the corpus")]
    EmptyCorpus,
    #[error("degenerate split: {0}")]
    DegenerateSplit(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
