//! Multifractal detrended fluctuation analysis over short scales.

use super::rr::RRSeries;
use crate::numeric::{linear_fit, mean};

pub const SCALES: std::ops::RangeInclusive<usize> = 4..=16;
pub const Q_VALUES: [f64; 10] = [-5.0, -4.0, -3.0, -2.0, -1.0, 1.0, 2.0, 3.0, 4.0, 5.0];
pub const MIN_BEATS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mfdfa {
    pub width: f64,
    pub peak: f64,
    pub mean: f64,
    pub max: f64,
    pub fluctuation: f64,
}

impl Mfdfa {
    pub fn values(this: Option<&Self>) -> [Option<f64>; 5] {
        match this {
            Some(m) => [Some(m.width), Some(m.peak), Some(m.mean), Some(m.max), Some(m.fluctuation)],
            None => [None; 5],
        }
    }
}

/// Integrated mean-centred series.
pub fn profile(x: &[f64]) -> Vec<f64> {
    let m = mean(x).unwrap_or(0.0);
    x.iter()
        .scan(0.0, |acc, v| {
            *acc += v - m;
            Some(*acc)
        })
        .collect()
}

/// Residual variance of every forward and backward segment of length `s`
/// after order-1 detrending. Zero-variance segments are omitted.
pub fn segment_variances(profile: &[f64], s: usize) -> Vec<f64> {
    let n = profile.len();
    let count = n / s;
    let t: Vec<f64> = (0..s).map(|i| i as f64).collect();
    let starts = (0..count).map(|v| v * s).chain((0..count).map(|v| n - (v + 1) * s));
    starts
        .filter_map(|start| {
            let seg = &profile[start..start + s];
            let (slope, intercept) = linear_fit(&t, seg)?;
            let var = seg
                .iter()
                .zip(&t)
                .map(|(y, x)| (y - slope * x - intercept).powi(2))
                .sum::<f64>()
                / s as f64;
            (var > 1e-18 * (1.0 + seg.iter().map(|v| v * v).sum::<f64>())).then_some(var)
        })
        .collect()
}

/// q-th order fluctuation function from segment variances.
pub fn fluctuation(variances: &[f64], q: f64) -> f64 {
    let mean_pow = variances.iter().map(|v| v.powf(q / 2.0)).sum::<f64>() / variances.len() as f64;
    mean_pow.powf(1.0 / q)
}

/// Derivative of samples `y` at nonuniform abscissae `x`: second-order
/// central differences inside, one-sided at the ends.
pub fn gradient(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                (y[1] - y[0]) / (x[1] - x[0])
            } else if i == n - 1 {
                (y[n - 1] - y[n - 2]) / (x[n - 1] - x[n - 2])
            } else {
                let hl = x[i] - x[i - 1];
                let hr = x[i + 1] - x[i];
                (hl * hl * y[i + 1] - hr * hr * y[i - 1] + (hr * hr - hl * hl) * y[i]) / (hl * hr * (hl + hr))
            }
        })
        .collect()
}

/// Generalised Hurst exponents h(q) and the mean ln F₂(s).
pub fn hurst_exponents(x: &[f64]) -> Option<(Vec<f64>, f64)> {
    let y = profile(x);
    let mut log_s = Vec::new();
    let mut log_f: Vec<Vec<f64>> = vec![Vec::new(); Q_VALUES.len()];
    for s in SCALES {
        let vars = segment_variances(&y, s);
        if vars.is_empty() {
            return None;
        }
        log_s.push((s as f64).ln());
        for (qi, q) in Q_VALUES.iter().enumerate() {
            log_f[qi].push(fluctuation(&vars, *q).ln());
        }
    }
    let h = log_f
        .iter()
        .map(|lf| linear_fit(&log_s, lf).map(|(slope, _)| slope))
        .collect::<Option<Vec<_>>>()?;
    let q2 = Q_VALUES.iter().position(|q| *q == 2.0)?;
    Some((h, mean(&log_f[q2])?))
}

pub fn mfdfa_alpha1(rr: &RRSeries) -> Option<Mfdfa> {
    let x = &rr.nn_ms;
    if x.len() + 1 < MIN_BEATS {
        return None;
    }
    let (h, fluct) = hurst_exponents(x)?;
    let tau: Vec<f64> = Q_VALUES.iter().zip(&h).map(|(q, h)| q * h - 1.0).collect();
    let alpha = gradient(&Q_VALUES, &tau);
    let f: Vec<f64> = Q_VALUES.iter().zip(&alpha).zip(&tau).map(|((q, a), t)| q * a - t).collect();
    let a_min = alpha.iter().copied().fold(f64::INFINITY, f64::min);
    let a_max = alpha.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let peak_idx = (0..f.len()).fold(0, |best, i| if f[i] > f[best] { i } else { best });
    let out = Mfdfa {
        width: a_max - a_min,
        peak: alpha[peak_idx],
        mean: mean(&alpha)?,
        max: a_max,
        fluctuation: fluct,
    };
    Mfdfa::values(Some(&out)).iter().all(|v| v.is_some_and(f64::is_finite)).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;
    use rand_distr::{Distribution, Normal};

    fn white(n: usize, seed: u64) -> Vec<f64> {
        let mut r = rng(seed);
        let d = Normal::new(800.0, 40.0).unwrap();
        (0..n).map(|_| d.sample(&mut r)).collect()
    }

    // Monofractal DFA-1 with non-overlapping forward windows, written out directly.
    fn dfa_oracle(x: &[f64]) -> f64 {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        let mut y = vec![0.0; x.len()];
        let mut acc = 0.0;
        for (i, v) in x.iter().enumerate() {
            acc += v - m;
            y[i] = acc;
        }
        let mut pts = Vec::new();
        for s in 4..=16usize {
            let mut total = 0.0;
            let mut k = 0;
            for seg in y.chunks_exact(s) {
                let n = s as f64;
                let sx = (0..s).map(|i| i as f64).sum::<f64>();
                let sxx = (0..s).map(|i| (i * i) as f64).sum::<f64>();
                let sy: f64 = seg.iter().sum();
                let sxy: f64 = seg.iter().enumerate().map(|(i, v)| i as f64 * v).sum();
                let b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
                let a = (sy - b * sx) / n;
                total += seg.iter().enumerate().map(|(i, v)| (v - a - b * i as f64).powi(2)).sum::<f64>() / n;
                k += 1;
            }
            pts.push(((s as f64).ln(), (total / k as f64).sqrt().ln()));
        }
        let n = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
        (n * sxy - sx * sy) / (n * sxx - sx * sx)
    }

    #[test]
    fn white_noise_peak_near_half() {
        let x = white(600, 11);
        let m = mfdfa_alpha1(&RRSeries::from_nn(x.clone())).unwrap();
        assert!((m.peak - 0.5).abs() < 0.2, "{m:?}");
        assert!((dfa_oracle(&x) - 0.5).abs() < 0.2);
        assert!(m.width >= 0.0 && m.max >= m.peak);
    }

    #[test]
    fn integrated_noise_has_higher_peak() {
        let w = white(600, 12);
        let mut acc = 0.0;
        let brown: Vec<f64> = w.iter().map(|v| {
            acc += (v - 800.0) * 0.2;
            800.0 + acc
        }).collect();
        let pw = mfdfa_alpha1(&RRSeries::from_nn(w.clone())).unwrap().peak;
        let pb = mfdfa_alpha1(&RRSeries::from_nn(brown.clone())).unwrap().peak;
        assert!(pb > pw);
        assert!(dfa_oracle(&brown) > dfa_oracle(&w));
    }

    #[test]
    fn constant_is_missing() {
        assert!(mfdfa_alpha1(&RRSeries::from_nn(vec![800.0; 100])).is_none());
    }

    #[test]
    fn short_is_missing() {
        assert!(mfdfa_alpha1(&RRSeries::from_nn(white(20, 1))).is_none());
    }

    #[test]
    fn gradient_matches_quadratic() {
        let x = Q_VALUES.to_vec();
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        let g = gradient(&x, &y);
        for i in 1..x.len() - 1 {
            assert!((g[i] - 2.0 * x[i]).abs() < 1e-12);
        }
    }
}
