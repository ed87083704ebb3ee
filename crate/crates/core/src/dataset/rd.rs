//! The `.rd` text format.
//!
//! ```text
//! # co2a0000364.rd
//! # 120 trials, 64 chans, 416 samples
//! # 3.906000 msecs uV
//! # S1 obj, trial 0
//! # FP1 chan 0
//! 0 FP1 0 -8.921
//! 0 FP1 1 -8.433
//! ```
//!
//! Four `#` header lines, then one block per channel introduced by
//! `# <name> chan <k>` with whitespace-separated 4-column data rows
//! (trial, sensor, sample index, microvolts).

use super::types::{Condition, Group, Recording};
use super::DatasetError;

/// Parses a complete `.rd` file.
///
/// The declared per-channel sample count from header line 2 is recorded but
/// not enforced: the channel blocks themselves are authoritative, and only a
/// non-contiguous sample index inside a block is an error.
pub fn parse_rd(text: &str) -> Result<Recording, DatasetError> {
    let mut lines = text.lines().enumerate();
    let mut header = Vec::with_capacity(4);
    for (idx, line) in lines.by_ref() {
        if line.trim().is_empty() {
            continue;
        }
        let line = line.trim();
        if !line.starts_with('#') {
            return Err(DatasetError::MalformedHeader(format!(
                "expected a '#' header at line {}, found data",
                idx + 1
            )));
        }
        header.push(line.trim_start_matches('#').trim().to_string());
        if header.len() == 4 {
            break;
        }
    }
    if header.len() < 4 {
        return Err(DatasetError::MalformedHeader("fewer than 4 header lines".into()));
    }

    // Line 1: subject id, group from the 4th letter.
    let subject_id = header[0]
        .split_whitespace()
        .next()
        .unwrap_or("")
        .trim_end_matches(".rd")
        .to_string();
    if subject_id.is_empty() {
        return Err(DatasetError::MalformedHeader("missing subject id".into()));
    }
    let group = match subject_id.as_bytes().get(3) {
        Some(b'a') => Group::Alcoholic,
        Some(b'c') => Group::Control,
        _ => return Err(DatasetError::UnknownGroup(subject_id)),
    };

    // Line 2: "<n> trials, <n> chans, <n> samples".
    let counts: Vec<u32> = header[1]
        .split(|ch: char| !ch.is_ascii_digit())
        .filter(|s| !s.is_empty())
        .filter_map(|s| s.parse().ok())
        .collect();
    if counts.len() < 3 {
        return Err(DatasetError::MalformedHeader(format!(
            "expected trial/channel/sample counts, got {:?}",
            header[1]
        )));
    }
    let (declared_trials, declared_chans, declared_samples) = (counts[0], counts[1], counts[2]);

    // Line 3: sampling period in milliseconds.
    let msecs: f64 = header[2]
        .split_whitespace()
        .find_map(|tok| tok.parse::<f64>().ok())
        .ok_or_else(|| {
            DatasetError::MalformedHeader(format!("no sampling period in {:?}", header[2]))
        })?;
    if msecs <= 0.0 {
        return Err(DatasetError::MalformedHeader("non-positive sampling period".into()));
    }
    let sample_rate_hz = 1000.0 / msecs;

    // Line 4: "<condition>, trial <n>".
    let (cond_part, trial_part) = header[3].split_once(',').ok_or_else(|| {
        DatasetError::MalformedHeader(format!("expected 'condition, trial n', got {:?}", header[3]))
    })?;
    let condition = Condition::parse(cond_part).ok_or_else(|| {
        DatasetError::MalformedHeader(format!("unknown condition {:?}", cond_part.trim()))
    })?;
    let trial_number: u32 = trial_part
        .split_whitespace()
        .find_map(|tok| tok.parse().ok())
        .ok_or_else(|| {
            DatasetError::MalformedHeader(format!("no trial number in {:?}", trial_part))
        })?;

    // Channel blocks.
    let mut channels: Vec<String> = Vec::new();
    let mut data: Vec<Vec<f64>> = Vec::new();
    for (idx, raw) in lines {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            // "# FP1 chan 0"
            let name = rest.split_whitespace().next().unwrap_or("").to_string();
            if name.is_empty() {
                return Err(DatasetError::MalformedHeader(format!(
                    "empty channel header at line {}",
                    idx + 1
                )));
            }
            if channels.contains(&name) {
                return Err(DatasetError::MalformedHeader(format!(
                    "duplicate channel block {name:?}"
                )));
            }
            channels.push(name);
            data.push(Vec::new());
            continue;
        }
        let cols: Vec<&str> = line.split_whitespace().collect();
        if cols.len() != 4 {
            return Err(DatasetError::RowArity {
                line: idx + 1,
                detail: format!("expected 4 columns, found {}", cols.len()),
            });
        }
        let channel = channels.last().ok_or(DatasetError::MalformedHeader(
            "data row before any channel header".into(),
        ))?;
        if cols[1] != channel {
            return Err(DatasetError::RowArity {
                line: idx + 1,
                detail: format!("row channel {:?} inside block {channel:?}", cols[1]),
            });
        }
        let sample_index: usize = cols[2].parse().map_err(|_| DatasetError::IndexGap {
            channel: channel.clone(),
            expected: data.last().unwrap().len(),
            found: cols[2].to_string(),
        })?;
        let block = data.last_mut().unwrap();
        if sample_index != block.len() {
            return Err(DatasetError::IndexGap {
                channel: channel.clone(),
                expected: block.len(),
                found: sample_index.to_string(),
            });
        }
        let value: f64 = cols[3].parse().map_err(|_| DatasetError::RowArity {
            line: idx + 1,
            detail: format!("bad sensor value {:?}", cols[3]),
        })?;
        block.push(value);
    }

    if channels.is_empty() {
        return Err(DatasetError::MalformedHeader("no channel blocks".into()));
    }
    let first_len = data[0].len();
    for (name, block) in channels.iter().zip(&data) {
        if block.len() != first_len {
            return Err(DatasetError::IndexGap {
                channel: name.clone(),
                expected: first_len,
                found: block.len().to_string(),
            });
        }
    }
    if declared_chans as usize != channels.len() {
        log::debug!(
            "{subject_id}: header declares {declared_chans} channels, file has {}",
            channels.len()
        );
    }

    Ok(Recording {
        subject_id,
        group,
        condition,
        trial_number,
        sample_rate_hz,
        channels,
        data,
        declared_trials,
        declared_samples,
    })
}

/// Renders a [`Recording`] back to `.rd` text. Parsing the output yields an
/// identical `Recording`.
pub fn to_rd_text(rec: &Recording) -> String {
    let mut out = String::new();
    out.push_str(&format!("# {}.rd\n", rec.subject_id));
    out.push_str(&format!(
        "# {} trials, {} chans, {} samples\n",
        rec.declared_trials,
        rec.channels.len(),
        rec.declared_samples
    ));
    out.push_str(&format!("# {:.6} msecs uV\n", 1000.0 / rec.sample_rate_hz));
    out.push_str(&format!("# {}, trial {}\n", rec.condition, rec.trial_number));
    for (c, name) in rec.channels.iter().enumerate() {
        out.push_str(&format!("# {name} chan {c}\n"));
        for (k, v) in rec.data[c].iter().enumerate() {
            out.push_str(&format!("{} {name} {k} {v}\n", rec.trial_number));
        }
    }
    out
}
