//! Signal CSV and PAQ CSV readers/writers.
//!
//! Signal files carry a `#key=value` header block followed by one sample per
//! line:
//!
//! ```text
//! #dataset=A1
//! #participant=p01
//! #activity=speech
//! #channel=ECG
//! #fs=1024
//! 0.0123
//! ...
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use super::types::{Channel, PaqResponses, RawRecording};
use crate::error::{Error, Result};

const HEADER_KEYS: [&str; 5] = ["dataset", "participant", "activity", "channel", "fs"];

pub fn load_recording(path: impl AsRef<Path>) -> Result<RawRecording> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;

    let mut header: [Option<(String, usize)>; 5] = Default::default();
    let mut samples = Vec::new();
    let mut first_sample_line = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(entry) = line.strip_prefix('#') {
            if first_sample_line.is_some() {
                return Err(Error::parse(path, line_no, "header line after sample data"));
            }
            let (key, value) = entry
                .split_once('=')
                .ok_or_else(|| Error::parse(path, line_no, format!("malformed header line {line:?}")))?;
            let key = key.trim();
            let slot = HEADER_KEYS
                .iter()
                .position(|k| *k == key)
                .ok_or_else(|| Error::parse(path, line_no, format!("unknown header key {key:?}")))?;
            if header[slot].is_some() {
                return Err(Error::parse(path, line_no, format!("duplicate header key {key:?}")));
            }
            header[slot] = Some((value.trim().to_string(), line_no));
            continue;
        }
        first_sample_line.get_or_insert(line_no);
        let value: f64 = line
            .parse()
            .map_err(|_| Error::parse(path, line_no, format!("non-numeric sample {line:?}")))?;
        if !value.is_finite() {
            return Err(Error::parse(path, line_no, format!("non-finite sample {line:?}")));
        }
        samples.push(value);
    }

    let mut fields = Vec::with_capacity(5);
    for (slot, key) in HEADER_KEYS.iter().enumerate() {
        match header[slot].take() {
            Some(v) => fields.push(v),
            None => return Err(Error::parse(path, 1, format!("missing header key {key:?}"))),
        }
    }
    let (fs_text, fs_line) = &fields[4];
    let sampling_rate: f64 = fs_text
        .parse()
        .map_err(|_| Error::parse(path, *fs_line, format!("invalid sampling rate {fs_text:?}")))?;
    if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
        return Err(Error::parse(path, *fs_line, format!("invalid sampling rate {fs_text:?}")));
    }
    let (ch_text, ch_line) = &fields[3];
    let channel: Channel = ch_text
        .parse()
        .map_err(|_| Error::parse(path, *ch_line, format!("unknown channel {ch_text:?}")))?;
    if samples.is_empty() {
        return Err(Error::parse(path, text.lines().count().max(1), "no samples"));
    }

    RawRecording::new(
        fields[0].0.clone(),
        fields[1].0.clone(),
        fields[2].0.clone(),
        channel,
        sampling_rate,
        samples,
    )
}

pub fn save_recording(path: impl AsRef<Path>, rec: &RawRecording) -> Result<()> {
    let mut out = String::with_capacity(rec.samples.len() * 24 + 128);
    out.push_str(&format!("#dataset={}\n", rec.dataset_id));
    out.push_str(&format!("#participant={}\n", rec.participant_id));
    out.push_str(&format!("#activity={}\n", rec.activity_id));
    out.push_str(&format!("#channel={}\n", rec.channel));
    out.push_str(&format!("#fs={}\n", rec.sampling_rate));
    for v in &rec.samples {
        out.push_str(&format!("{v:.16e}\n"));
    }
    let mut f = fs::File::create(path)?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

const PAQ_COLUMNS: [&str; 7] = ["participant", "activity", "q1", "q2", "q3", "q4", "q5"];

/// Reads `participant,activity,q1,q2,q3,q4,q5`. Scores are kept raw; Q2
/// reversal happens at labeling time.
pub fn load_paq(path: impl AsRef<Path>) -> Result<Vec<PaqResponses>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    let headers = reader.headers()?.clone();
    let mut cols = [0usize; 7];
    for (slot, name) in PAQ_COLUMNS.iter().enumerate() {
        cols[slot] = headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::parse(path, 1, format!("missing column {name:?}")))?;
    }

    let mut out = Vec::new();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map(|p| p.line() as usize).unwrap_or(0);
        let field = |slot: usize| record.get(cols[slot]).unwrap_or("");
        let mut scores = [0u8; 5];
        for q in 0..5 {
            let text = field(q + 2);
            let v: i64 = text
                .parse()
                .map_err(|_| Error::parse(path, line, format!("q{} is not an integer: {text:?}", q + 1)))?;
            if !(1..=5).contains(&v) {
                return Err(Error::parse(path, line, format!("q{} score {v} outside [1,5]", q + 1)));
            }
            scores[q] = v as u8;
        }
        out.push(PaqResponses::new(field(0), field(1), scores)?);
    }
    Ok(out)
}

pub fn save_paq(path: impl AsRef<Path>, responses: &[PaqResponses]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(PAQ_COLUMNS)?;
    for r in responses {
        let mut row = vec![r.participant_id.clone(), r.activity_id.clone()];
        row.extend(r.scores.iter().map(|s| s.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}
