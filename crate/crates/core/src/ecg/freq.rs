//! Spectral HRV: NN intervals are interpolated onto a uniform 4 Hz
//! tachogram with a natural cubic spline, and band powers are read off a
//! Welch periodogram (32 s Hann segments, 50% overlap).

use rustfft::{num_complex::Complex64, FftPlanner};

use super::rr::RRSeries;

pub const TACHOGRAM_FS: f64 = 4.0;
pub const WELCH_SEGMENT_S: f64 = 32.0;
pub const LF_BAND: (f64, f64) = (0.04, 0.15);
pub const HF_BAND: (f64, f64) = (0.15, 0.4);
pub const VHF_BAND: (f64, f64) = (0.4, 0.5);
/// Minimum span of beats required for spectral estimates, seconds.
pub const MIN_SPAN_S: f64 = 30.0;

/// Band powers in ms².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrequencyDomain {
    pub lf: Option<f64>,
    pub hf: Option<f64>,
    pub vhf: Option<f64>,
    pub lf_hf: Option<f64>,
}

impl FrequencyDomain {
    /// Feature-vector form: powers as `ln(1 + P)`, the ratio unchanged.
    pub fn values(&self) -> [Option<f64>; 4] {
        let log = |p: Option<f64>| p.map(|v| v.ln_1p());
        [log(self.lf), log(self.hf), log(self.vhf), self.lf_hf]
    }
}

/// Natural cubic spline through `(x, y)` evaluated at `at` (clamped to the
/// knot range).
pub fn cubic_spline(x: &[f64], y: &[f64], at: &[f64]) -> Vec<f64> {
    let n = x.len();
    if n == 0 {
        return vec![f64::NAN; at.len()];
    }
    if n < 3 {
        return at
            .iter()
            .map(|&t| {
                if n == 1 || x[1] == x[0] {
                    y[0]
                } else {
                    let f = ((t - x[0]) / (x[1] - x[0])).clamp(0.0, 1.0);
                    y[0] + f * (y[1] - y[0])
                }
            })
            .collect();
    }
    // second derivatives via the tridiagonal system (Thomas algorithm)
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let mut m = vec![0.0; n];
    let mut diag = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let mut upper = vec![0.0; n];
    diag[0] = 1.0;
    diag[n - 1] = 1.0;
    for i in 1..n - 1 {
        let lower = h[i - 1];
        diag[i] = 2.0 * (h[i - 1] + h[i]);
        upper[i] = h[i];
        rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        let w = lower / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for i in (1..n - 1).rev() {
        m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
    }

    at.iter()
        .map(|&t| {
            let t = t.clamp(x[0], x[n - 1]);
            let k = match x.partition_point(|v| *v <= t) {
                0 => 0,
                p => (p - 1).min(n - 2),
            };
            let hk = h[k];
            let a = (x[k + 1] - t) / hk;
            let b = (t - x[k]) / hk;
            a * y[k] + b * y[k + 1] + ((a.powi(3) - a) * m[k] + (b.powi(3) - b) * m[k + 1]) * hk * hk / 6.0
        })
        .collect()
}

/// One-sided Welch PSD (density scaling) with a periodic Hann window and
/// per-segment mean removal. Returns (frequencies, power).
pub fn welch(x: &[f64], fs: f64, segment: usize) -> (Vec<f64>, Vec<f64>) {
    let seg = segment.min(x.len()).max(1);
    let step = (seg / 2).max(1);
    let window: Vec<f64> = (0..seg)
        .map(|i| 0.5 - 0.5 * (std::f64::consts::TAU * i as f64 / seg as f64).cos())
        .collect();
    let wss: f64 = window.iter().map(|w| w * w).sum();
    let n_freq = seg / 2 + 1;
    let mut psd = vec![0.0; n_freq];
    let fft = FftPlanner::new().plan_fft_forward(seg);
    let mut count = 0usize;
    let mut start = 0;
    while start + seg <= x.len() {
        let chunk = &x[start..start + seg];
        let mu = chunk.iter().sum::<f64>() / seg as f64;
        let mut buf: Vec<Complex64> = chunk
            .iter()
            .zip(&window)
            .map(|(v, w)| Complex64::new((v - mu) * w, 0.0))
            .collect();
        fft.process(&mut buf);
        for (k, p) in psd.iter_mut().enumerate() {
            let mut v = buf[k].norm_sqr() / (fs * wss);
            if k != 0 && !(seg.is_multiple_of(2) && k == seg / 2) {
                v *= 2.0;
            }
            *p += v;
        }
        count += 1;
        start += step;
    }
    if count > 0 {
        psd.iter_mut().for_each(|p| *p /= count as f64);
    }
    let freqs = (0..n_freq).map(|k| k as f64 * fs / seg as f64).collect();
    (freqs, psd)
}

fn band_power(freqs: &[f64], psd: &[f64], band: (f64, f64)) -> f64 {
    let df = if freqs.len() > 1 { freqs[1] - freqs[0] } else { 0.0 };
    freqs
        .iter()
        .zip(psd)
        .filter(|(f, _)| **f >= band.0 && **f < band.1)
        .map(|(_, p)| p * df)
        .sum()
}

/// Uniform tachogram of the NN series at 4 Hz.
pub fn tachogram(rr: &RRSeries) -> Vec<f64> {
    let t = &rr.beat_times_s;
    if t.len() < 2 {
        return Vec::new();
    }
    let n = ((t[t.len() - 1] - t[0]) * TACHOGRAM_FS).floor() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|i| t[0] + i as f64 / TACHOGRAM_FS).collect();
    cubic_spline(t, &rr.nn_ms, &grid)
}

pub fn frequency_domain(rr: &RRSeries) -> FrequencyDomain {
    let t = &rr.beat_times_s;
    if rr.len() < 4 || t[t.len() - 1] - t[0] < MIN_SPAN_S {
        return FrequencyDomain::default();
    }
    let tach = tachogram(rr);
    let (freqs, psd) = welch(&tach, TACHOGRAM_FS, (WELCH_SEGMENT_S * TACHOGRAM_FS) as usize);
    let lf = band_power(&freqs, &psd, LF_BAND);
    let hf = band_power(&freqs, &psd, HF_BAND);
    let vhf = band_power(&freqs, &psd, VHF_BAND);
    // powers below round-off of the mean level count as zero
    let floor = 1e-12 * crate::numeric::mean(&rr.nn_ms).unwrap_or(0.0).powi(2);
    FrequencyDomain {
        lf: Some(lf),
        hf: Some(hf),
        vhf: Some(vhf),
        lf_hf: (hf > floor).then(|| lf / hf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Beats whose interval follows `1000 + 50 sin(2π f t)` ms.
    fn modulated(f: f64, secs: f64) -> RRSeries {
        let mut t = 0.0;
        let mut nn = Vec::new();
        while t < secs {
            let v = 1000.0 + 50.0 * (std::f64::consts::TAU * f * t).sin();
            nn.push(v);
            t += v / 1000.0;
        }
        RRSeries::from_nn(nn)
    }

    /// Direct periodogram of the tachogram at a single frequency: an
    /// independent (DFT-free) estimate of where the variance sits.
    fn goertzel_power(x: &[f64], fs: f64, f: f64) -> f64 {
        let mu = x.iter().sum::<f64>() / x.len() as f64;
        let (mut re, mut im) = (0.0, 0.0);
        for (i, v) in x.iter().enumerate() {
            let ph = std::f64::consts::TAU * f * i as f64 / fs;
            re += (v - mu) * ph.cos();
            im -= (v - mu) * ph.sin();
        }
        (re * re + im * im) / x.len() as f64
    }

    #[test]
    fn low_frequency_modulation_lands_in_lf() {
        let rr = modulated(0.1, 60.0);
        let fd = frequency_domain(&rr);
        assert!(fd.lf.unwrap() > 10.0 * fd.hf.unwrap(), "{fd:?}");
        let tach = tachogram(&rr);
        assert!(goertzel_power(&tach, 4.0, 0.1) > 10.0 * goertzel_power(&tach, 4.0, 0.3));
    }

    #[test]
    fn respiratory_modulation_lands_in_hf() {
        let rr = modulated(0.3, 60.0);
        let fd = frequency_domain(&rr);
        assert!(fd.hf.unwrap() > fd.lf.unwrap(), "{fd:?}");
    }

    #[test]
    fn constant_nn_has_no_power() {
        let fd = frequency_domain(&RRSeries::from_nn(vec![900.0; 80]));
        assert!(fd.lf.unwrap() < 1e-6 && fd.hf.unwrap() < 1e-6 && fd.vhf.unwrap() < 1e-6);
        assert_eq!(fd.lf_hf, None);
    }

    #[test]
    fn spline_reproduces_knots_and_lines() {
        let x = [0.0, 1.0, 2.5, 3.0, 5.0];
        let y = [1.0, 3.0, 6.0, 7.0, 11.0];
        let at: Vec<f64> = x.to_vec();
        for (a, b) in cubic_spline(&x, &y, &at).iter().zip(&y) {
            assert!((a - b).abs() < 1e-12);
        }
        let line: Vec<f64> = x.iter().map(|v| 2.0 * v + 1.0).collect();
        let mid = [0.5, 1.7, 4.2];
        for (a, t) in cubic_spline(&x, &line, &mid).iter().zip(mid) {
            assert!((a - (2.0 * t + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn welch_parseval() {
        // Integrated one-sided density equals the variance of a sine (A²/2).
        let fs = 4.0;
        let x: Vec<f64> = (0..1024).map(|i| 3.0 * (std::f64::consts::TAU * 0.25 * i as f64 / fs).sin()).collect();
        let (f, p) = welch(&x, fs, 128);
        let total: f64 = p.iter().sum::<f64>() * (f[1] - f[0]);
        assert!((total - 4.5).abs() / 4.5 < 0.01, "{total}");
    }
}
