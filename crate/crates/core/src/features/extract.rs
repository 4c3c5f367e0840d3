use std::collections::BTreeMap;

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::labels::{label_from_paq, Label};
use super::matrix::{FeatureMatrix, GroupKey};
use super::schema::full_schema;
use crate::ecg;
use crate::eda;
use crate::error::{Error, Result};
use crate::preprocess::{bandpass_filter, lowpass_filter, segment_windows, WINDOW_S, WINDOW_SHIFT_S};
use crate::signal::{Channel, PaqResponses, RawRecording};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub ecg_band_hz: [f64; 2],
    pub eda_cutoff_hz: f64,
    pub window_s: f64,
    pub shift_s: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            ecg_band_hz: [1.0, 49.0],
            eda_cutoff_hz: 5.0,
            window_s: WINDOW_S,
            shift_s: WINDOW_SHIFT_S,
        }
    }
}

/// Band-passed ECG. The upper edge is pulled below Nyquist for slow
/// recordings.
pub fn clean_ecg(rec: &RawRecording, cfg: &PipelineConfig) -> Result<Vec<f64>> {
    let [lo, hi] = cfg.ecg_band_hz;
    let hi = hi.min(0.45 * rec.sampling_rate);
    bandpass_filter(&rec.samples, rec.sampling_rate, lo, hi)
}

/// Low-passed EDA; recordings already sampled below twice the cutoff pass
/// through unchanged.
pub fn clean_eda(rec: &RawRecording, cfg: &PipelineConfig) -> Result<Vec<f64>> {
    if cfg.eda_cutoff_hz >= rec.sampling_rate / 2.0 {
        return Ok(rec.samples.clone());
    }
    lowpass_filter(&rec.samples, rec.sampling_rate, cfg.eda_cutoff_hz)
}

/// One row per aligned 60 s window of a session. Window k starts
/// `k × shift` seconds into both channels.
pub fn extract_session(ecg_rec: &RawRecording, eda_rec: &RawRecording, label: Label, cfg: &PipelineConfig) -> Result<FeatureMatrix> {
    let ecg_clean = clean_ecg(ecg_rec, cfg)?;
    let eda_clean = clean_eda(eda_rec, cfg)?;
    let ecg_w = segment_windows(&ecg_clean, ecg_rec.sampling_rate, cfg.window_s, cfg.shift_s)?;
    let eda_w = segment_windows(&eda_clean, eda_rec.sampling_rate, cfg.window_s, cfg.shift_s)?;
    let n = ecg_w.windows.len().min(eda_w.windows.len());
    let schema = full_schema();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|k| {
            let hrv = ecg::window_features(&ecg_w.windows[k]);
            let f5 = eda::window_features(&eda_w.windows[k]);
            hrv.iter().chain(f5).map(|v| v.unwrap_or(f64::NAN)).collect()
        })
        .collect();
    let data = Array2::from_shape_vec((n, schema.len()), rows.concat()).map_err(|e| Error::Invariant(e.to_string()))?;
    let key = GroupKey::new(&ecg_rec.dataset_id, &ecg_rec.participant_id, &ecg_rec.activity_id);
    FeatureMatrix::new(schema, data, vec![label; n], vec![key; n])
}

type SessionKey = (String, String);

/// Pairs ECG and EDA recordings by (participant, activity), labels each
/// pair from its questionnaire and stacks the rows in key order.
pub fn extract_dataset(recordings: &[RawRecording], paq: &[PaqResponses], cfg: &PipelineConfig) -> Result<FeatureMatrix> {
    let mut sessions: BTreeMap<SessionKey, [Option<&RawRecording>; 2]> = BTreeMap::new();
    for r in recordings {
        let slot = &mut sessions.entry((r.participant_id.clone(), r.activity_id.clone())).or_default()[match r.channel {
            Channel::Ecg => 0,
            Channel::Eda => 1,
        }];
        if slot.is_some() {
            return Err(Error::Data(format!(
                "duplicate {} recording for participant {} activity {}",
                r.channel, r.participant_id, r.activity_id
            )));
        }
        *slot = Some(r);
    }
    let labels: BTreeMap<SessionKey, Label> = paq
        .iter()
        .map(|p| ((p.participant_id.clone(), p.activity_id.clone()), label_from_paq(p)))
        .collect();
    let mut parts = Vec::with_capacity(sessions.len());
    for ((pid, act), [ecg_rec, eda_rec]) in &sessions {
        let (Some(ecg_rec), Some(eda_rec)) = (ecg_rec, eda_rec) else {
            return Err(Error::Data(format!("participant {pid} activity {act} lacks an ECG or EDA recording")));
        };
        let label = labels
            .get(&(pid.clone(), act.clone()))
            .copied()
            .ok_or_else(|| Error::LabelsUnavailable(format!("no questionnaire for participant {pid} activity {act}")))?;
        parts.push(extract_session(ecg_rec, eda_rec, label, cfg)?);
    }
    if parts.is_empty() {
        return Ok(FeatureMatrix::empty(full_schema()));
    }
    FeatureMatrix::concat(&parts.iter().collect::<Vec<_>>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{generate_cohort, CohortSpec};

    #[test]
    fn cohort_rows_follow_window_arithmetic() {
        let spec = CohortSpec {
            participants: 2,
            duration_s: 61.0,
            ..CohortSpec::default()
        };
        let cohort = generate_cohort(&spec, 4).unwrap();
        let recs: Vec<RawRecording> = cohort.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
        let m = extract_dataset(&recs, &cohort.paq(), &PipelineConfig::default()).unwrap();
        assert_eq!(m.n_rows(), 2 * 5);
        assert_eq!(m.n_cols(), 52);
        let (a, n) = m.class_counts();
        assert_eq!(a, 5);
        assert_eq!(n, 5);
        let mean_nn = m.data.column(0);
        assert!(mean_nn.iter().all(|v| v.is_finite() && *v > 400.0 && *v < 1500.0));
    }

    #[test]
    fn missing_questionnaire() {
        let spec = CohortSpec {
            participants: 2,
            duration_s: 60.0,
            ..CohortSpec::default()
        };
        let cohort = generate_cohort(&spec, 4).unwrap();
        let recs: Vec<RawRecording> = cohort.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
        let err = extract_dataset(&recs, &[], &PipelineConfig::default()).unwrap_err();
        assert!(matches!(err, Error::LabelsUnavailable(_)));
    }
}
