//! Synthetic cohorts: participants × activities with ECG, EDA and PAQ
//! answers whose physiology depends on a latent anxious/non-anxious state.

use std::fs;
use std::path::Path;

use rand::Rng as _;
use rand_distr::{Distribution, Exp, Normal};
use serde::{Deserialize, Serialize};

use super::io::{save_paq, save_recording};
use super::synth::{synthesize_ecg, synthesize_eda, EcgSynthParams, EdaSynthParams};
use super::types::{PaqResponses, RawRecording};
use crate::error::{Error, Result};
use crate::seed;

/// Physiological response model. Anxious sessions raise heart rate, lower
/// beat-to-beat variability and produce more frequent, larger SCRs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Physiology {
    pub base_hr: f64,
    pub hr_between_sd: f64,
    pub anxious_hr_delta: f64,
    pub calm_hrv_sd: f64,
    pub anxious_hrv_sd: f64,
    pub tonic_level: f64,
    pub tonic_between_sd: f64,
    pub anxious_tonic_delta: f64,
    pub calm_scr_interval: f64,
    pub anxious_scr_interval: f64,
    pub scr_amplitude: f64,
    pub anxious_scr_gain: f64,
    pub ecg_noise_sd: f64,
}

impl Default for Physiology {
    fn default() -> Self {
        Self {
            base_hr: 72.0,
            hr_between_sd: 4.0,
            anxious_hr_delta: 16.0,
            calm_hrv_sd: 45.0,
            anxious_hrv_sd: 20.0,
            tonic_level: 4.0,
            tonic_between_sd: 0.8,
            anxious_tonic_delta: 1.5,
            calm_scr_interval: 10.0,
            anxious_scr_interval: 4.0,
            scr_amplitude: 0.15,
            anxious_scr_gain: 2.0,
            ecg_noise_sd: 0.01,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CohortSpec {
    pub dataset_id: String,
    pub participants: usize,
    pub activities: Vec<String>,
    pub duration_s: f64,
    pub ecg_fs: f64,
    pub eda_fs: f64,
    pub anxious_fraction: f64,
    pub physiology: Physiology,
}

impl Default for CohortSpec {
    fn default() -> Self {
        Self {
            dataset_id: "S1".into(),
            participants: 12,
            activities: vec!["speech".into()],
            duration_s: 75.0,
            ecg_fs: 256.0,
            eda_fs: 32.0,
            anxious_fraction: 0.5,
            physiology: Physiology::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticSession {
    pub ecg: RawRecording,
    pub eda: RawRecording,
    pub paq: PaqResponses,
    pub anxious: bool,
}

#[derive(Debug, Clone)]
pub struct SyntheticCohort {
    pub dataset_id: String,
    pub sessions: Vec<SyntheticSession>,
}

impl SyntheticCohort {
    pub fn paq(&self) -> Vec<PaqResponses> {
        self.sessions.iter().map(|s| s.paq.clone()).collect()
    }

    /// Writes `<participant>_<activity>_{ecg,eda}.csv` plus `paq.csv`.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir)?;
        for s in &self.sessions {
            let stem = format!("{}_{}", s.paq.participant_id, s.paq.activity_id);
            save_recording(dir.join(format!("{stem}_ecg.csv")), &s.ecg)?;
            save_recording(dir.join(format!("{stem}_eda.csv")), &s.eda)?;
        }
        save_paq(dir.join("paq.csv"), &self.paq())
    }
}

fn paq_for(rng: &mut seed::Rng, participant: &str, activity: &str, anxious: bool) -> Result<PaqResponses> {
    // Effective (post-reversal) scores: anxious sessions answer 3..=5 on every
    // item (sum >= 15), calm sessions 1..=2 (sum <= 10).
    let mut scores = [0u8; 5];
    for (q, s) in scores.iter_mut().enumerate() {
        let effective: u8 = if anxious { rng.random_range(3..=5) } else { rng.random_range(1..=2) };
        *s = if q == 1 { 6 - effective } else { effective };
    }
    PaqResponses::new(participant, activity, scores)
}

pub fn generate_cohort(spec: &CohortSpec, run_seed: u64) -> Result<SyntheticCohort> {
    if spec.participants == 0 || spec.activities.is_empty() {
        return Err(Error::InvalidParameter("cohort needs participants and activities".into()));
    }
    if !(0.0..=1.0).contains(&spec.anxious_fraction) {
        return Err(Error::InvalidParameter("anxious_fraction must lie in [0, 1]".into()));
    }
    let ph = &spec.physiology;
    let normal = |m: f64, s: f64| Normal::new(m, s).map_err(|e| Error::InvalidParameter(e.to_string()));
    let n_anxious = (spec.anxious_fraction * spec.participants as f64).round() as usize;

    let mut sessions = Vec::new();
    for p in 0..spec.participants {
        let pid = format!("p{:02}", p + 1);
        let mut prng = seed::rng_for(run_seed, &[&spec.dataset_id, &pid]);
        let hr_offset = normal(0.0, ph.hr_between_sd)?.sample(&mut prng);
        let tonic_offset = normal(0.0, ph.tonic_between_sd)?.sample(&mut prng);

        for (a, activity) in spec.activities.iter().enumerate() {
            let mut rng = seed::rng_for(run_seed, &[&spec.dataset_id, &pid, activity]);
            // Balanced assignment, rotated per activity so participants differ across activities.
            let anxious = (p + a * (spec.participants / 2).max(1)) % spec.participants < n_anxious;

            let hr = (ph.base_hr + hr_offset + if anxious { ph.anxious_hr_delta } else { 0.0 }).clamp(40.0, 180.0);
            let hrv = if anxious { ph.anxious_hrv_sd } else { ph.calm_hrv_sd };
            let ecg_seed = rng.random::<u64>();
            let (mut ecg, _) = synthesize_ecg(&EcgSynthParams::new(
                hr,
                hrv,
                spec.duration_s,
                spec.ecg_fs,
                ph.ecg_noise_sd,
                ecg_seed,
            ))?;

            let interval = if anxious { ph.anxious_scr_interval } else { ph.calm_scr_interval };
            let gain = if anxious { ph.anxious_scr_gain } else { 1.0 };
            let gaps = Exp::new(1.0 / interval.max(0.1)).map_err(|e| Error::InvalidParameter(e.to_string()))?;
            let mut onsets = Vec::new();
            let mut amps = Vec::new();
            let mut t = rng.random_range(0.5..2.0);
            while t < spec.duration_s - 1.0 {
                onsets.push(t);
                amps.push(ph.scr_amplitude * gain * rng.random_range(0.6..1.4));
                t += 1.5 + gaps.sample(&mut rng);
            }
            let tonic = (ph.tonic_level + tonic_offset + if anxious { ph.anxious_tonic_delta } else { 0.0 }).max(0.2);
            let (mut eda, _) = synthesize_eda(&EdaSynthParams {
                scr_onsets: onsets,
                amplitudes: amps,
                tonic_level: tonic,
                duration: spec.duration_s,
                sampling_rate: spec.eda_fs,
                seed: rng.random(),
            })?;

            for rec in [&mut ecg, &mut eda] {
                rec.dataset_id = spec.dataset_id.clone();
                rec.participant_id = pid.clone();
                rec.activity_id = activity.clone();
            }
            let paq = paq_for(&mut rng, &pid, activity, anxious)?;
            sessions.push(SyntheticSession { ecg, eda, paq, anxious });
        }
    }
    Ok(SyntheticCohort {
        dataset_id: spec.dataset_id.clone(),
        sessions,
    })
}
