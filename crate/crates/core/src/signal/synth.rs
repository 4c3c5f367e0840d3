//! Synthetic ECG and EDA with exact ground truth, used as oracles for peak
//! detection, HRV recovery and SCR detection.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use super::types::{Channel, RawRecording, SynthGroundTruth, SynthScr};
use crate::error::{Error, Result};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcgSynthParams {
    /// Beats per minute.
    pub heart_rate: f64,
    /// SD of beat-to-beat intervals, ms.
    pub hrv_sd: f64,
    pub duration: f64,
    pub sampling_rate: f64,
    /// White measurement noise SD, mV.
    pub noise_sd: f64,
    pub seed: u64,
}

impl EcgSynthParams {
    pub fn new(heart_rate: f64, hrv_sd: f64, duration: f64, sampling_rate: f64, noise_sd: f64, seed: u64) -> Self {
        Self {
            heart_rate,
            hrv_sd,
            duration,
            sampling_rate,
            noise_sd,
            seed,
        }
    }
}

/// Ricker (negated second Gaussian derivative) R-wave width, seconds.
const QRS_SIGMA_S: f64 = 0.010;
const QRS_AMPLITUDE_MV: f64 = 1.0;
const P_AMPLITUDE_MV: f64 = 0.12;
const T_AMPLITUDE_MV: f64 = 0.30;
const MIN_INTERVAL_MS: f64 = 250.0;

fn gaussian(t: f64, sigma: f64) -> f64 {
    (-0.5 * (t / sigma).powi(2)).exp()
}

fn beat_template(t: f64, mean_rr_s: f64) -> f64 {
    let u = t / QRS_SIGMA_S;
    let qrs = QRS_AMPLITUDE_MV * (1.0 - u * u) * (-0.5 * u * u).exp();
    let p_offset = -(0.16f64).min(0.2 * mean_rr_s);
    let t_offset = (0.25f64).min(0.35 * mean_rr_s);
    let p = P_AMPLITUDE_MV * gaussian(t - p_offset, 0.025);
    let tw = T_AMPLITUDE_MV * gaussian(t - t_offset, 0.04);
    qrs + p + tw
}

/// Generates ECG whose beat-to-beat intervals are drawn from
/// `Normal(60000 / heart_rate, hrv_sd)` ms, with a fixed P-QRS-T template
/// centred on each R peak. The ground truth lists the R-peak sample indices.
pub fn synthesize_ecg(p: &EcgSynthParams) -> Result<(RawRecording, SynthGroundTruth)> {
    if !(30.0..=220.0).contains(&p.heart_rate) {
        return Err(Error::InvalidParameter(format!("heart rate {} bpm outside [30, 220]", p.heart_rate)));
    }
    if !(p.duration >= 10.0) {
        return Err(Error::InvalidParameter(format!("duration {} s shorter than 10 s", p.duration)));
    }
    if !(p.sampling_rate > 0.0 && p.sampling_rate.is_finite()) {
        return Err(Error::InvalidParameter(format!("invalid sampling rate {}", p.sampling_rate)));
    }
    if !(p.hrv_sd >= 0.0 && p.noise_sd >= 0.0) {
        return Err(Error::InvalidParameter("hrv_sd and noise_sd must be non-negative".into()));
    }

    let mut rng = seed::rng_for(p.seed, &["ecg"]);
    let fs = p.sampling_rate;
    let n = (p.duration * fs).round() as usize;
    let mean_rr_ms = 60_000.0 / p.heart_rate;
    let rr = Normal::new(mean_rr_ms, p.hrv_sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;

    let mut peaks = Vec::new();
    let mut t = 0.5 * mean_rr_ms / 1000.0;
    loop {
        let idx = (t * fs).round() as usize;
        if idx >= n {
            break;
        }
        peaks.push(idx);
        let interval = if p.hrv_sd > 0.0 {
            rr.sample(&mut rng).max(MIN_INTERVAL_MS)
        } else {
            mean_rr_ms
        };
        t += interval / 1000.0;
    }

    let mean_rr_s = mean_rr_ms / 1000.0;
    let half_span = (0.6 * fs).ceil() as isize;
    let mut samples = vec![0.0; n];
    for &pk in &peaks {
        let lo = (pk as isize - half_span).max(0) as usize;
        let hi = ((pk as isize + half_span) as usize).min(n - 1);
        for (i, s) in samples.iter_mut().enumerate().take(hi + 1).skip(lo) {
            let dt = (i as f64 - pk as f64) / fs;
            *s += beat_template(dt, mean_rr_s);
        }
    }
    if p.noise_sd > 0.0 {
        let noise = Normal::new(0.0, p.noise_sd).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for s in &mut samples {
            *s += noise.sample(&mut rng);
        }
    }

    let rec = RawRecording::new("synthetic", "p0", "a0", Channel::Ecg, fs, samples)?;
    Ok((rec, SynthGroundTruth::Ecg { peak_indices: peaks }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdaSynthParams {
    /// Response onsets, seconds from the start.
    pub scr_onsets: Vec<f64>,
    /// Peak amplitude of each response above the baseline, µS.
    pub amplitudes: Vec<f64>,
    pub tonic_level: f64,
    pub duration: f64,
    pub sampling_rate: f64,
    pub seed: u64,
}

/// Rise and decay time constants of the biexponential SCR pulse.
pub const SCR_RISE_S: f64 = 0.5;
pub const SCR_DECAY_S: f64 = 4.0;
const DRIFT_AMPLITUDE_US: f64 = 0.02;
const DRIFT_PERIOD_S: f64 = 120.0;
const MIN_ONSET_GAP_S: f64 = 1.0;

/// Time from onset to the pulse maximum.
pub fn scr_peak_delay() -> f64 {
    (SCR_DECAY_S / SCR_RISE_S).ln() * SCR_DECAY_S * SCR_RISE_S / (SCR_DECAY_S - SCR_RISE_S)
}

/// Unit-peak biexponential pulse evaluated `t` seconds after onset.
pub fn scr_pulse_shape(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let raw = |t: f64| (-t / SCR_DECAY_S).exp() - (-t / SCR_RISE_S).exp();
    raw(t) / raw(scr_peak_delay())
}

/// Generates `tonic + slow drift + Σ pulses`. Onsets closer than 1 s are
/// rejected.
pub fn synthesize_eda(p: &EdaSynthParams) -> Result<(RawRecording, SynthGroundTruth)> {
    if p.scr_onsets.len() != p.amplitudes.len() {
        return Err(Error::InvalidParameter("onset and amplitude counts differ".into()));
    }
    if !(p.sampling_rate > 0.0 && p.sampling_rate.is_finite()) {
        return Err(Error::InvalidParameter(format!("invalid sampling rate {}", p.sampling_rate)));
    }
    if !(p.duration > 0.0) {
        return Err(Error::InvalidParameter("duration must be positive".into()));
    }
    if !p.tonic_level.is_finite() {
        return Err(Error::InvalidParameter("tonic level must be finite".into()));
    }
    let mut events: Vec<(f64, f64)> = p.scr_onsets.iter().copied().zip(p.amplitudes.iter().copied()).collect();
    for &(onset, amp) in &events {
        if !(0.0..p.duration).contains(&onset) {
            return Err(Error::InvalidParameter(format!("onset {onset} s outside recording")));
        }
        if !(amp > 0.0 && amp.is_finite()) {
            return Err(Error::InvalidParameter(format!("amplitude {amp} must be positive")));
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    if let Some(w) = events.windows(2).find(|w| w[1].0 - w[0].0 < MIN_ONSET_GAP_S) {
        return Err(Error::InvalidParameter(format!(
            "overlapping pulses: onsets {} s and {} s closer than {MIN_ONSET_GAP_S} s",
            w[0].0, w[1].0
        )));
    }

    let mut rng = seed::rng_for(p.seed, &["eda"]);
    let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let fs = p.sampling_rate;
    let n = (p.duration * fs).round() as usize;
    let samples: Vec<f64> = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let drift = DRIFT_AMPLITUDE_US * (std::f64::consts::TAU * t / DRIFT_PERIOD_S + phase).sin();
            let phasic: f64 = events.iter().map(|&(on, a)| a * scr_pulse_shape(t - on)).sum();
            p.tonic_level + drift + phasic
        })
        .collect();

    let rise = scr_peak_delay();
    let truth = events
        .iter()
        .map(|&(on, a)| SynthScr {
            onset_index: (on * fs).round() as usize,
            amplitude: a,
            rise_time: rise,
        })
        .collect();
    let rec = RawRecording::new("synthetic", "p0", "a0", Channel::Eda, fs, samples)?;
    Ok((rec, SynthGroundTruth::Eda { scr_events: truth }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_variance_ecg_has_one_second_intervals() {
        let (rec, gt) = synthesize_ecg(&EcgSynthParams::new(60.0, 0.0, 60.0, 1024.0, 0.0, 11)).unwrap();
        let peaks = gt.peak_indices();
        assert!((59..=61).contains(&peaks.len()), "{}", peaks.len());
        for w in peaks.windows(2) {
            assert_eq!(w[1] - w[0], 1024);
        }
        assert_eq!(rec.samples.len(), 60 * 1024);
        // The template maximum sits on the ground-truth index.
        let pk = peaks[10];
        let local = &rec.samples[pk - 50..pk + 50];
        let argmax = local.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(argmax, 50);
    }

    #[test]
    fn ecg_mean_interval_tracks_heart_rate() {
        let (_, gt) = synthesize_ecg(&EcgSynthParams::new(75.0, 30.0, 120.0, 700.0, 0.01, 7)).unwrap();
        let p = gt.peak_indices();
        let nn: Vec<f64> = p.windows(2).map(|w| (w[1] - w[0]) as f64 / 700.0 * 1000.0).collect();
        let mean = nn.iter().sum::<f64>() / nn.len() as f64;
        assert!((mean - 800.0).abs() / 800.0 < 0.01, "mean NN {mean}");
    }

    #[test]
    fn ecg_is_deterministic() {
        let p = EcgSynthParams::new(75.0, 30.0, 30.0, 250.0, 0.05, 3);
        let a = synthesize_ecg(&p).unwrap();
        let b = synthesize_ecg(&p).unwrap();
        assert_eq!(a, b);
        let c = synthesize_ecg(&EcgSynthParams { seed: 4, ..p }).unwrap();
        assert_ne!(a.0.samples, c.0.samples);
    }

    #[test]
    fn ecg_rejects_nonphysical() {
        assert!(synthesize_ecg(&EcgSynthParams::new(20.0, 0.0, 60.0, 250.0, 0.0, 1)).is_err());
        assert!(synthesize_ecg(&EcgSynthParams::new(230.0, 0.0, 60.0, 250.0, 0.0, 1)).is_err());
        assert!(synthesize_ecg(&EcgSynthParams::new(60.0, 0.0, 5.0, 250.0, 0.0, 1)).is_err());
    }

    fn eda(onsets: Vec<f64>, amps: Vec<f64>) -> Result<(RawRecording, SynthGroundTruth)> {
        synthesize_eda(&EdaSynthParams {
            scr_onsets: onsets,
            amplitudes: amps,
            tonic_level: 2.0,
            duration: 60.0,
            sampling_rate: 32.0,
            seed: 5,
        })
    }

    #[test]
    fn single_pulse_peak_is_tonic_plus_amplitude() {
        let (rec, gt) = eda(vec![20.0], vec![0.5]).unwrap();
        let max = rec.samples.iter().cloned().fold(f64::MIN, f64::max);
        assert!((max - 2.5).abs() <= 0.05 * 2.5, "max {max}");
        assert_eq!(gt.scr_events().len(), 1);
        assert_eq!(gt.scr_events()[0].onset_index, 640);
    }

    #[test]
    fn no_pulses_is_tonic_plus_drift() {
        let (rec, gt) = eda(vec![], vec![]).unwrap();
        assert!(gt.scr_events().is_empty());
        assert!(rec.samples.iter().all(|v| (v - 2.0).abs() <= DRIFT_AMPLITUDE_US + 1e-12));
    }

    #[test]
    fn close_pulses_rejected() {
        let err = eda(vec![10.0, 10.5], vec![0.3, 0.3]).unwrap_err();
        assert!(err.to_string().contains("overlapping"));
        assert!(eda(vec![10.0], vec![0.0]).is_err());
        assert!(eda(vec![70.0], vec![0.1]).is_err());
    }

    #[test]
    fn pulse_shape_peaks_at_unity() {
        let d = scr_peak_delay();
        assert!((scr_pulse_shape(d) - 1.0).abs() < 1e-12);
        assert!(scr_pulse_shape(d - 0.01) < 1.0 && scr_pulse_shape(d + 0.01) < 1.0);
        assert!((0.9..1.5).contains(&d));
    }
}
