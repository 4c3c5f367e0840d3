//! Hamilton-style QRS detection.
//!
//! The band-passed ECG is narrowed to 8–16 Hz, differentiated, rectified and
//! smoothed with an 80 ms moving average. Candidate peaks of the smoothed
//! signal are classified against an adaptive threshold placed between the
//! median QRS and median noise peak heights, with a 200 ms refractory period
//! and a back-search for missed beats when no QRS appears for 1.5 mean RR.

use super::rr::RRSeries;
use crate::preprocess::{Sos, Window};

const QRS_BAND: (f64, f64) = (8.0, 16.0);
const MOVING_AVERAGE_S: f64 = 0.080;
const REFRACTORY_S: f64 = 0.200;
const CANDIDATE_HALF_WIDTH_S: f64 = 0.100;
const THRESHOLD_COEFF: f64 = 0.3125;
const BACKSEARCH_RR_FACTOR: f64 = 1.5;
const BACKSEARCH_THRESHOLD_FACTOR: f64 = 0.5;
const LOCATE_HALF_WIDTH_S: f64 = 0.120;
const REFINE_HALF_WIDTH_S: f64 = 0.025;
const BUFFER_LEN: usize = 8;

fn median(v: &[f64]) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len().is_multiple_of(2) {
        0.5 * (s[m - 1] + s[m])
    } else {
        s[m]
    }
}

fn push_bounded(buf: &mut Vec<f64>, v: f64) {
    if buf.len() == BUFFER_LEN {
        buf.remove(0);
    }
    buf.push(v);
}

fn argmax_in(x: &[f64], lo: usize, hi: usize) -> usize {
    (lo..=hi).fold(lo, |best, i| if x[i] > x[best] { i } else { best })
}

/// Centered moving average with a window of `width` samples.
fn moving_average(x: &[f64], width: usize) -> Vec<f64> {
    let n = x.len();
    let half = width / 2;
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for v in x {
        prefix.push(prefix.last().unwrap() + v);
    }
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half + 1).min(n);
            (prefix[hi] - prefix[lo]) / (hi - lo) as f64
        })
        .collect()
}

/// Detects R peaks in a band-passed ECG trace. Returns sample indices.
pub fn detect_peaks(signal: &[f64], fs: f64) -> Vec<usize> {
    let n = signal.len();
    if n < 3 || fs <= 2.0 * QRS_BAND.1 {
        return Vec::new();
    }
    let Ok(band) = Sos::butter_bandpass(2, QRS_BAND.0, QRS_BAND.1, fs) else {
        return Vec::new();
    };
    let narrow = band.filtfilt(signal);
    let mut deriv = vec![0.0; n];
    for i in 1..n {
        deriv[i] = (narrow[i] - narrow[i - 1]).abs();
    }
    let ma_width = ((MOVING_AVERAGE_S * fs).round() as usize).max(1);
    let ma = moving_average(&deriv, ma_width);

    // candidates: samples that dominate a +/-100 ms neighbourhood
    let half = ((CANDIDATE_HALF_WIDTH_S * fs).round() as usize).max(1);
    let candidates: Vec<usize> = (0..n)
        .filter(|&i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            ma[i] > 0.0 && (lo..=hi).all(|j| ma[j] < ma[i] || (ma[j] == ma[i] && j >= i))
        })
        .collect();
    if candidates.is_empty() {
        return Vec::new();
    }

    // learning phase: per-second maxima over the first (up to) 8 seconds
    let sec = fs.round() as usize;
    let mut qrs_buf: Vec<f64> = ma
        .chunks(sec.max(1))
        .take(BUFFER_LEN)
        .map(|c| c.iter().cloned().fold(0.0, f64::max))
        .collect();
    let mut noise_buf: Vec<f64> = Vec::new();
    let mut rr_buf: Vec<f64> = Vec::new();
    let refractory = (REFRACTORY_S * fs).round() as usize;

    let mut detected: Vec<usize> = Vec::new();
    let mut pending: Vec<usize> = Vec::new();
    let threshold = |q: &[f64], nz: &[f64]| {
        let nm = median(nz);
        nm + THRESHOLD_COEFF * (median(q) - nm)
    };

    for &c in &candidates {
        let last = detected.last().copied();
        if last.is_some_and(|l| c < l + refractory) {
            continue;
        }
        // back-search before classifying the current candidate
        if let Some(l) = last {
            if rr_buf.len() >= 2 {
                let rr_mean = rr_buf.iter().sum::<f64>() / rr_buf.len() as f64;
                if (c - l) as f64 > BACKSEARCH_RR_FACTOR * rr_mean {
                    let th = threshold(&qrs_buf, &noise_buf) * BACKSEARCH_THRESHOLD_FACTOR;
                    let best = pending
                        .iter()
                        .copied()
                        .filter(|&p| p >= l + refractory && ma[p] > th)
                        .max_by(|a, b| ma[*a].total_cmp(&ma[*b]));
                    if let Some(b) = best {
                        push_bounded(&mut rr_buf, (b - l) as f64);
                        push_bounded(&mut qrs_buf, ma[b]);
                        detected.push(b);
                        pending.clear();
                        if c < b + refractory {
                            continue;
                        }
                    }
                }
            }
        }
        let th = threshold(&qrs_buf, &noise_buf);
        if ma[c] > th {
            if let Some(l) = detected.last() {
                push_bounded(&mut rr_buf, (c - l) as f64);
            }
            push_bounded(&mut qrs_buf, ma[c]);
            detected.push(c);
            pending.clear();
        } else {
            push_bounded(&mut noise_buf, ma[c]);
            pending.push(c);
        }
    }

    // locate the R wave on the input trace
    let locate = (LOCATE_HALF_WIDTH_S * fs).round() as usize;
    let refine = ((REFINE_HALF_WIDTH_S * fs).round() as usize).max(1);
    let narrow_abs: Vec<f64> = narrow.iter().map(|v| v.abs()).collect();
    let mut peaks: Vec<usize> = detected
        .iter()
        .map(|&d| {
            let coarse = argmax_in(&narrow_abs, d.saturating_sub(locate), (d + locate).min(n - 1));
            argmax_in(signal, coarse.saturating_sub(refine), (coarse + refine).min(n - 1))
        })
        .collect();
    peaks.sort_unstable();
    peaks.dedup();
    let mut merged: Vec<usize> = Vec::with_capacity(peaks.len());
    for p in peaks {
        match merged.last_mut() {
            Some(last) if p < *last + refractory => {
                if signal[p] > signal[*last] {
                    *last = p;
                }
            }
            _ => merged.push(p),
        }
    }
    merged
}

/// Runs the detector on one window. `None` marks the window unusable
/// (fewer than two peaks or no accepted NN interval).
pub fn detect_r_peaks(window: &Window<'_>) -> Option<RRSeries> {
    let peaks = detect_peaks(window.samples, window.sampling_rate);
    if peaks.len() < 2 {
        return None;
    }
    let rr = RRSeries::from_peaks(peaks, window.sampling_rate);
    if rr.is_empty() {
        None
    } else {
        Some(rr)
    }
}

/// One-to-one matching of detections to reference peaks within `tolerance`
/// samples. Returns (true positives, false positives, false negatives).
pub fn match_peaks(detected: &[usize], truth: &[usize], tolerance: usize) -> (usize, usize, usize) {
    let mut used = vec![false; detected.len()];
    let mut tp = 0;
    for &t in truth {
        let best = detected
            .iter()
            .enumerate()
            .filter(|(i, d)| !used[*i] && d.abs_diff(t) <= tolerance)
            .min_by_key(|(_, d)| d.abs_diff(t));
        if let Some((i, _)) = best {
            used[i] = true;
            tp += 1;
        }
    }
    (tp, detected.len() - tp, truth.len() - tp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::preprocess::bandpass_filter;
    use crate::signal::{synthesize_ecg, EcgSynthParams};

    fn scores(hr: f64, sd: f64, secs: f64, fs: f64, noise: f64, seed: u64) -> (f64, f64) {
        let (rec, gt) = synthesize_ecg(&EcgSynthParams::new(hr, sd, secs, fs, noise, seed)).unwrap();
        let x = bandpass_filter(&rec.samples, fs, 1.0, 49.0_f64.min(fs / 2.0 - 1.0)).unwrap();
        let det = detect_peaks(&x, fs);
        let tol = (0.05 * fs).round() as usize;
        let (tp, fp, fneg) = match_peaks(&det, gt.peak_indices(), tol);
        (tp as f64 / (tp + fneg) as f64, tp as f64 / (tp + fp) as f64)
    }

    #[test]
    fn clean_60bpm_all_found() {
        let (se, pp) = scores(60.0, 0.0, 60.0, 1024.0, 0.0, 1);
        assert_eq!(se, 1.0);
        assert_eq!(pp, 1.0);
    }

    #[test]
    fn variable_75bpm_at_250hz() {
        let (se, pp) = scores(75.0, 30.0, 60.0, 250.0, 0.01, 3);
        assert!(se >= 0.99 && pp >= 0.99, "{se} {pp}");
    }

    #[test]
    fn flat_line_unusable() {
        let x = vec![0.0; 60 * 256];
        let w = Window {
            start_index: 0,
            samples: &x,
            sampling_rate: 256.0,
        };
        assert!(detect_r_peaks(&w).is_none());
    }

    #[test]
    fn matching_counts() {
        assert_eq!(match_peaks(&[10, 50, 90], &[12, 88], 3), (2, 1, 0));
        assert_eq!(match_peaks(&[], &[5], 3), (0, 0, 1));
    }
}
