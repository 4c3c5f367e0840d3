//! Higuchi and Katz fractal dimensions and Lempel–Ziv complexity.

use super::rr::RRSeries;
use crate::numeric::{finite, linear_fit, median};

pub const HIGUCHI_KMAX: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Fractal {
    pub hfd: Option<f64>,
    pub kfd: Option<f64>,
    pub lzc: Option<f64>,
}

/// Curve lengths `L(k)` for k = 1..=k_max.
pub fn higuchi_lengths(x: &[f64], k_max: usize) -> Vec<(usize, f64)> {
    let n = x.len();
    (1..=k_max)
        .filter_map(|k| {
            let lengths: Vec<f64> = (0..k)
                .filter_map(|m| {
                    let steps = (n - 1 - m) / k;
                    if steps == 0 {
                        return None;
                    }
                    let path: f64 = (1..=steps).map(|i| (x[m + i * k] - x[m + (i - 1) * k]).abs()).sum();
                    Some(path * (n - 1) as f64 / (steps * k) as f64 / k as f64)
                })
                .collect();
            (!lengths.is_empty()).then(|| (k, lengths.iter().sum::<f64>() / lengths.len() as f64))
        })
        .collect()
}

/// Least-squares slope of ln L(k) against ln(1/k).
pub fn higuchi_fd(x: &[f64], k_max: usize) -> Option<f64> {
    if x.len() < k_max + 2 {
        return None;
    }
    let lk = higuchi_lengths(x, k_max);
    if lk.len() < 2 || lk.iter().any(|(_, l)| *l <= 0.0) {
        return None;
    }
    let xs: Vec<f64> = lk.iter().map(|(k, _)| (1.0 / *k as f64).ln()).collect();
    let ys: Vec<f64> = lk.iter().map(|(_, l)| l.ln()).collect();
    linear_fit(&xs, &ys).map(|(slope, _)| slope)
}

/// Katz: `log10(n) / (log10(n) + log10(d / L))`, with `L` the summed absolute
/// successive differences, `n = L / mean step` and `d` the largest
/// excursion from the first sample.
pub fn katz_fd(x: &[f64]) -> Option<f64> {
    if x.len() < 3 {
        return None;
    }
    let steps: Vec<f64> = x.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let total: f64 = steps.iter().sum();
    if total <= 0.0 {
        return None;
    }
    let mean_step = total / steps.len() as f64;
    let d = x.iter().map(|v| (v - x[0]).abs()).fold(0.0, f64::max);
    let n = (total / mean_step).log10();
    finite(n / (n + (d / total).log10()))
}

/// Kaspar–Schuster LZ76 phrase count of a binary sequence.
pub fn lz76_complexity(s: &[bool]) -> usize {
    let n = s.len();
    if n < 2 {
        return n;
    }
    let (mut i, mut c, mut l, mut k, mut k_max) = (0usize, 1usize, 1usize, 1usize, 1usize);
    loop {
        if s[i + k - 1] == s[l + k - 1] {
            k += 1;
            if l + k > n {
                c += 1;
                break;
            }
        } else {
            k_max = k_max.max(k);
            i += 1;
            if i == l {
                c += 1;
                l += k_max;
                if l + 1 > n {
                    break;
                }
                i = 0;
                k = 1;
                k_max = 1;
            } else {
                k = 1;
            }
        }
    }
    c
}

/// LZ76 complexity of the median-binarized series, normalized by
/// `n / log2(n)`.
pub fn lempel_ziv(x: &[f64]) -> Option<f64> {
    if x.len() < 2 {
        return None;
    }
    let med = median(x)?;
    let bits: Vec<bool> = x.iter().map(|v| *v > med).collect();
    let n = x.len() as f64;
    Some(lz76_complexity(&bits) as f64 * n.log2() / n)
}

pub fn fractal_suite(rr: &RRSeries) -> Fractal {
    let x = &rr.nn_ms;
    Fractal {
        hfd: higuchi_fd(x, HIGUCHI_KMAX),
        kfd: katz_fd(x),
        lzc: lempel_ziv(x),
    }
}
