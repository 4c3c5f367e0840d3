use crate::preprocess::lowpass_filter;

pub const TONIC_WINDOW_S: f64 = 4.0;
pub const TONIC_SMOOTHING_HZ: f64 = 5.0;

#[derive(Debug, Clone, PartialEq)]
pub struct EdaDecomposition {
    pub tonic: Vec<f64>,
    pub phasic: Vec<f64>,
    pub sampling_rate: f64,
}

fn half_width(fs: f64) -> usize {
    ((TONIC_WINDOW_S * fs / 2.0).round() as usize).max(1)
}

/// Centred moving median, truncated at the edges.
pub fn moving_median(x: &[f64], half: usize) -> Vec<f64> {
    let n = x.len();
    let mut buf = Vec::with_capacity(2 * half + 1);
    (0..n)
        .map(|i| {
            buf.clear();
            buf.extend_from_slice(&x[i.saturating_sub(half)..(i + half + 1).min(n)]);
            buf.sort_by(f64::total_cmp);
            let m = buf.len();
            if m % 2 == 1 {
                buf[m / 2]
            } else {
                0.5 * (buf[m / 2 - 1] + buf[m / 2])
            }
        })
        .collect()
}

/// Lower envelope: linear interpolation through the samples that are the
/// minimum of their centred window, plus both endpoints.
pub fn trough_envelope(x: &[f64], half: usize) -> Vec<f64> {
    let n = x.len();
    if n < 3 {
        return x.to_vec();
    }
    let mut knots = vec![0];
    for i in 1..n - 1 {
        let lo = i.saturating_sub(half);
        let hi = (i + half + 1).min(n);
        if x[lo..hi].iter().all(|v| x[i] <= *v) {
            knots.push(i);
        }
    }
    knots.push(n - 1);
    let mut out = vec![0.0; n];
    for k in knots.windows(2) {
        let (a, b) = (k[0], k[1]);
        for (i, o) in out[a..=b].iter_mut().enumerate() {
            *o = x[a] + (x[b] - x[a]) * i as f64 / (b - a) as f64;
        }
    }
    out
}

/// Tonic level = trough envelope, smoothed by a 4 s moving median and the
/// 5 Hz low-pass (skipped when 5 Hz is at or above Nyquist). Phasic is the
/// remainder, so `tonic + phasic` reproduces the input.
pub fn decompose(signal: &[f64], sampling_rate: f64) -> EdaDecomposition {
    let half = half_width(sampling_rate);
    let envelope = moving_median(&trough_envelope(signal, half), half);
    let tonic = if TONIC_SMOOTHING_HZ < sampling_rate / 2.0 {
        lowpass_filter(&envelope, sampling_rate, TONIC_SMOOTHING_HZ).unwrap_or(envelope)
    } else {
        envelope
    };
    let phasic = signal.iter().zip(&tonic).map(|(s, t)| s - t).collect();
    EdaDecomposition {
        tonic,
        phasic,
        sampling_rate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{synthesize_eda, EdaSynthParams};

    #[test]
    fn constant_signal() {
        let d = decompose(&vec![2.0; 32 * 60], 32.0);
        assert!(d.tonic.iter().all(|t| (t - 2.0).abs() < 1e-9));
        assert!(d.phasic.iter().all(|p| p.abs() < 1e-3));
    }

    #[test]
    fn additivity() {
        let x: Vec<f64> = (0..800).map(|i| 3.0 + (i as f64 * 0.05).sin() + 0.001 * (i % 7) as f64).collect();
        let d = decompose(&x, 32.0);
        for i in 0..x.len() {
            assert!((d.tonic[i] + d.phasic[i] - x[i]).abs() < 1e-9);
        }
    }

    #[test]
    fn slow_ramp_is_tonic() {
        let fs = 32.0;
        let x: Vec<f64> = (0..(60.0 * fs) as usize).map(|i| 2.0 + 0.01 * i as f64 / fs).collect();
        let d = decompose(&x, fs);
        let edge = (4.0 * fs) as usize;
        assert!(d.phasic[edge..x.len() - edge].iter().all(|p| p.abs() < 1e-3));
    }

    #[test]
    fn single_response_recovered() {
        let p = EdaSynthParams {
            scr_onsets: vec![20.0],
            amplitudes: vec![0.5],
            tonic_level: 5.0,
            duration: 60.0,
            sampling_rate: 32.0,
            seed: 1,
        };
        let (rec, _) = synthesize_eda(&p).unwrap();
        let d = decompose(&rec.samples, 32.0);
        let peak = d.phasic.iter().copied().fold(f64::MIN, f64::max);
        assert!((peak - 0.5).abs() < 0.05, "{peak}");
    }

    #[test]
    fn median_is_order_statistic() {
        assert_eq!(moving_median(&[5.0, 1.0, 3.0, 2.0, 4.0], 1), vec![3.0, 3.0, 2.0, 3.0, 3.0]);
    }
}
