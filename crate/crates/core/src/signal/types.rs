use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Channel {
    #[serde(rename = "ECG")]
    Ecg,
    #[serde(rename = "EDA")]
    Eda,
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Channel::Ecg => f.write_str("ECG"),
            Channel::Eda => f.write_str("EDA"),
        }
    }
}

impl FromStr for Channel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ECG" | "ecg" => Ok(Channel::Ecg),
            "EDA" | "eda" => Ok(Channel::Eda),
            other => Err(Error::InvalidParameter(format!("unknown channel {other:?}"))),
        }
    }
}

/// One channel of sampled physiology. ECG samples are in mV, EDA in µS.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecording {
    pub dataset_id: String,
    pub participant_id: String,
    pub activity_id: String,
    pub channel: Channel,
    pub sampling_rate: f64,
    pub samples: Vec<f64>,
}

impl RawRecording {
    pub fn new(
        dataset_id: impl Into<String>,
        participant_id: impl Into<String>,
        activity_id: impl Into<String>,
        channel: Channel,
        sampling_rate: f64,
        samples: Vec<f64>,
    ) -> Result<Self> {
        if !(sampling_rate.is_finite() && sampling_rate > 0.0) {
            return Err(Error::InvalidParameter(format!("invalid sampling rate {sampling_rate}")));
        }
        if samples.is_empty() {
            return Err(Error::InvalidParameter("recording has no samples".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite sample at index {i}")));
        }
        Ok(Self {
            dataset_id: dataset_id.into(),
            participant_id: participant_id.into(),
            activity_id: activity_id.into(),
            channel,
            sampling_rate,
            samples,
        })
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sampling_rate
    }
}

/// Raw post-activity questionnaire answers, Q1..Q5 on a 1..=5 Likert scale.
/// Scores are stored unreversed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaqResponses {
    pub participant_id: String,
    pub activity_id: String,
    pub scores: [u8; 5],
}

impl PaqResponses {
    pub fn new(participant_id: impl Into<String>, activity_id: impl Into<String>, scores: [u8; 5]) -> Result<Self> {
        if let Some((i, s)) = scores.iter().enumerate().find(|(_, s)| !(1..=5).contains(*s)) {
            return Err(Error::InvalidParameter(format!("q{} score {s} outside [1,5]", i + 1)));
        }
        Ok(Self {
            participant_id: participant_id.into(),
            activity_id: activity_id.into(),
            scores,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthScr {
    pub onset_index: usize,
    pub amplitude: f64,
    pub rise_time: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SynthGroundTruth {
    Ecg { peak_indices: Vec<usize> },
    Eda { scr_events: Vec<SynthScr> },
}

impl SynthGroundTruth {
    pub fn peak_indices(&self) -> &[usize] {
        match self {
            SynthGroundTruth::Ecg { peak_indices } => peak_indices,
            SynthGroundTruth::Eda { .. } => &[],
        }
    }

    pub fn scr_events(&self) -> &[SynthScr] {
        match self {
            SynthGroundTruth::Eda { scr_events } => scr_events,
            SynthGroundTruth::Ecg { .. } => &[],
        }
    }
}
