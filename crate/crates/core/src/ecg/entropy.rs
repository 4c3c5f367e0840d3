//! Approximate, sample, Shannon, multiscale and composite multiscale entropy
//! of the NN series. Embedding dimension 2, tolerance 0.2 × SD, Chebyshev
//! distance.

use super::rr::RRSeries;
use crate::numeric::sample_sd;

pub const EMBEDDING: usize = 2;
pub const TOLERANCE_SD: f64 = 0.2;
pub const SHANNON_BINS: usize = 10;
pub const MAX_SCALE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Entropies {
    pub apen: Option<f64>,
    pub sampen: Option<f64>,
    pub shanen: Option<f64>,
    pub msen: Option<f64>,
    pub cmsen: Option<f64>,
}

fn chebyshev_within(x: &[f64], i: usize, j: usize, m: usize, r: f64) -> bool {
    (0..m).all(|k| (x[i + k] - x[j + k]).abs() <= r)
}

/// Pincus' approximate entropy (self-matches counted).
pub fn approximate_entropy(x: &[f64], m: usize, r: f64) -> Option<f64> {
    let n = x.len();
    if n < m + 2 {
        return None;
    }
    let phi = |m: usize| -> f64 {
        let count = n - m + 1;
        (0..count)
            .map(|i| {
                let c = (0..count).filter(|&j| chebyshev_within(x, i, j, m, r)).count();
                (c as f64 / count as f64).ln()
            })
            .sum::<f64>()
            / count as f64
    };
    Some(phi(m) - phi(m + 1))
}

/// Richman–Moorman sample entropy, `-ln(A / B)` over the first `n - m`
/// templates. `None` when either count is zero.
pub fn sample_entropy(x: &[f64], m: usize, r: f64) -> Option<f64> {
    let n = x.len();
    if n < m + 2 {
        return None;
    }
    let templates = n - m;
    let (mut a, mut b) = (0u64, 0u64);
    for i in 0..templates {
        for j in i + 1..templates {
            if chebyshev_within(x, i, j, m, r) {
                b += 1;
                if (x[i + m] - x[j + m]).abs() <= r {
                    a += 1;
                }
            }
        }
    }
    if a == 0 || b == 0 {
        return None;
    }
    Some(-(a as f64 / b as f64).ln())
}

/// Shannon entropy (bits) of an equal-width histogram.
pub fn shannon_entropy(x: &[f64], bins: usize) -> Option<f64> {
    if x.is_empty() || bins == 0 {
        return None;
    }
    let lo = x.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut counts = vec![0usize; bins];
    if hi > lo {
        let w = (hi - lo) / bins as f64;
        for v in x {
            counts[(((v - lo) / w) as usize).min(bins - 1)] += 1;
        }
    } else {
        counts[0] = x.len();
    }
    let n = x.len() as f64;
    Some(
        counts
            .iter()
            .filter(|c| **c > 0)
            .map(|c| {
                let p = *c as f64 / n;
                -p * p.log2()
            })
            .sum::<f64>()
            + 0.0,
    )
}

fn coarse_grain(x: &[f64], scale: usize, offset: usize) -> Vec<f64> {
    x[offset..]
        .chunks_exact(scale)
        .map(|c| c.iter().sum::<f64>() / scale as f64)
        .collect()
}

fn mean_defined(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<f64> = values.flatten().collect();
    (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
}

/// Mean sample entropy across coarse-grained scales 1..=max_scale with the
/// tolerance fixed from the original series.
pub fn multiscale_entropy(x: &[f64], m: usize, r: f64, max_scale: usize) -> Option<f64> {
    if x.len() < m + 2 {
        return None;
    }
    mean_defined((1..=max_scale).map(|s| sample_entropy(&coarse_grain(x, s, 0), m, r)))
}

/// Composite variant: at each scale, averages the sample entropy of every
/// coarse-graining offset.
pub fn composite_multiscale_entropy(x: &[f64], m: usize, r: f64, max_scale: usize) -> Option<f64> {
    if x.len() < m + 2 {
        return None;
    }
    mean_defined((1..=max_scale).map(|s| mean_defined((0..s).map(|k| sample_entropy(&coarse_grain(x, s, k), m, r)))))
}

pub fn entropy_suite(rr: &RRSeries) -> Entropies {
    let x = &rr.nn_ms;
    let Some(sd) = sample_sd(x) else {
        return Entropies::default();
    };
    if x.len() < EMBEDDING + 2 {
        return Entropies::default();
    }
    let r = TOLERANCE_SD * sd;
    Entropies {
        apen: approximate_entropy(x, EMBEDDING, r),
        sampen: sample_entropy(x, EMBEDDING, r),
        shanen: shannon_entropy(x, SHANNON_BINS),
        msen: multiscale_entropy(x, EMBEDDING, r, MAX_SCALE),
        cmsen: composite_multiscale_entropy(x, EMBEDDING, r, MAX_SCALE),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series() {
        let e = entropy_suite(&RRSeries::from_nn(vec![800.0; 30]));
        assert_eq!(e.sampen, Some(0.0));
        assert_eq!(e.shanen, Some(0.0));
    }

    #[test]
    fn too_short() {
        let e = entropy_suite(&RRSeries::from_nn(vec![800.0, 810.0, 820.0]));
        assert_eq!(e, Entropies::default());
    }

    #[test]
    fn shannon_uniform_bins() {
        let x: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!((shannon_entropy(&x, 10).unwrap() - 10f64.log2()).abs() < 1e-12);
    }
}
