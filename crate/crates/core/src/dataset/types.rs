//! Domain types shared across the pipeline.

use std::fmt;

/// Subject group, encoded by the 4th letter of the subject id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Group {
    Control,
    Alcoholic,
}

impl Group {
    pub fn as_str(&self) -> &'static str {
        match self {
            Group::Control => "control",
            Group::Alcoholic => "alcoholic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "control" => Some(Group::Control),
            "alcoholic" => Some(Group::Alcoholic),
            _ => None,
        }
    }

    /// Class index used by classifiers; the alcoholic group is the positive
    /// class throughout.
    pub fn class_index(&self) -> usize {
        match self {
            Group::Control => 0,
            Group::Alcoholic => 1,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Stimulus condition from the recording header.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Condition {
    S1Obj,
    S2Match,
    S2Nomatch,
}

impl Condition {
    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::S1Obj => "S1 obj",
            Condition::S2Match => "S2 match",
            Condition::S2Nomatch => "S2 nomatch",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "s1 obj" => Some(Condition::S1Obj),
            "s2 match" => Some(Condition::S2Match),
            "s2 nomatch" => Some(Condition::S2Nomatch),
            _ => None,
        }
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Identity of one trial; all windows cut from a trial share its key.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TrialKey {
    pub subject_id: String,
    pub trial_number: u32,
}

impl fmt::Display for TrialKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.subject_id, self.trial_number)
    }
}

/// One subject/trial of multi-channel EEG in microvolts.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub subject_id: String,
    pub group: Group,
    pub condition: Condition,
    pub trial_number: u32,
    pub sample_rate_hz: f64,
    pub channels: Vec<String>,
    /// Channel-major: `data[c][k]` is channel `c` at sample `k`.
    pub data: Vec<Vec<f64>>,
    /// Trial and per-channel sample counts declared by the file header.
    /// Kept verbatim; the per-channel blocks are the source of truth for the
    /// actual sample count.
    pub declared_trials: u32,
    pub declared_samples: u32,
}

impl Recording {
    pub fn trial_key(&self) -> TrialKey {
        TrialKey { subject_id: self.subject_id.clone(), trial_number: self.trial_number }
    }

    pub fn samples_per_channel(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArtifactKind {
    EyeBlink,
    EyebrowRaise,
}

impl ArtifactKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ArtifactKind::EyeBlink => "eye_blink",
            ArtifactKind::EyebrowRaise => "eyebrow_raise",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "eye_blink" => Some(ArtifactKind::EyeBlink),
            "eyebrow_raise" => Some(ArtifactKind::EyebrowRaise),
            _ => None,
        }
    }
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A 10-second artifact-collection trial: resting state with a scripted
/// artifact between `artifact_interval_s.0` and `artifact_interval_s.1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArtifactRecording {
    pub subject_id: String,
    pub artifact_kind: ArtifactKind,
    pub trial_number: u32,
    pub sample_rate_hz: f64,
    pub channels: Vec<String>,
    pub data: Vec<Vec<f64>>,
    pub artifact_interval_s: (f64, f64),
}

impl ArtifactRecording {
    pub fn trial_key(&self) -> TrialKey {
        TrialKey {
            subject_id: format!("{}-{}", self.subject_id, self.artifact_kind),
            trial_number: self.trial_number,
        }
    }
}

/// A fixed-length window of one channel with its labels.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowedExample {
    pub source: TrialKey,
    pub channel: String,
    pub samples: Vec<f64>,
    pub group_label: Option<Group>,
    pub artifact_label: Option<bool>,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn label_strings_round_trip() {
        for g in [Group::Control, Group::Alcoholic] {
            assert_eq!(Group::parse(g.as_str()), Some(g));
        }
        for c in [Condition::S1Obj, Condition::S2Match, Condition::S2Nomatch] {
            assert_eq!(Condition::parse(c.as_str()), Some(c));
        }
        for k in [ArtifactKind::EyeBlink, ArtifactKind::EyebrowRaise] {
            assert_eq!(ArtifactKind::parse(k.as_str()), Some(k));
        }
    }

    #[test]
    fn positive_class_is_alcoholic() {
        assert_eq!(Group::Alcoholic.class_index(), 1);
        assert_eq!(Group::Control.class_index(), 0);
    }
}
