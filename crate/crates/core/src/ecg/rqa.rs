//! Recurrence quantification of the NN series.
//!
//! Embedding dimension 3, delay 1, Euclidean distance, radius 0.2 × SD of
//! the NN series. The line of identity is excluded from all counts; when
//! tracing white vertical lines it acts as a recurrent point.

use super::rr::RRSeries;
use crate::numeric::sample_sd;

pub const EMBEDDING: usize = 3;
pub const DELAY: usize = 1;
pub const RADIUS_SD: f64 = 0.2;
pub const MIN_DIAGONAL: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rqa {
    /// Fraction of off-diagonal recurrent points.
    pub recurrence_rate: f64,
    /// `recurrence_rate × determinism`.
    pub diag_rec: f64,
    /// Fraction of recurrent points lying on diagonal lines of length ≥ 2.
    pub determinism: f64,
    /// Mean diagonal line length.
    pub l: f64,
    /// Mean white vertical line length.
    pub w: f64,
    /// Longest white vertical line.
    pub wmax: f64,
}

impl Rqa {
    pub fn values(this: Option<&Self>) -> [Option<f64>; 6] {
        match this {
            Some(r) => [r.recurrence_rate, r.diag_rec, r.determinism, r.l, r.w, r.wmax].map(Some),
            None => [None; 6],
        }
    }
}

/// Symmetric recurrence matrix of the delay embedding, row-major.
pub fn recurrence_matrix(x: &[f64], radius: f64) -> (usize, Vec<bool>) {
    let span = (EMBEDDING - 1) * DELAY;
    if x.len() <= span {
        return (0, Vec::new());
    }
    let n = x.len() - span;
    let mut m = vec![false; n * n];
    for i in 0..n {
        for j in i..n {
            let d2: f64 = (0..EMBEDDING).map(|k| (x[i + k * DELAY] - x[j + k * DELAY]).powi(2)).sum();
            let hit = d2.sqrt() <= radius;
            m[i * n + j] = hit;
            m[j * n + i] = hit;
        }
    }
    (n, m)
}

pub fn rqa_from_matrix(n: usize, m: &[bool]) -> Option<Rqa> {
    if n < 2 {
        return None;
    }
    let mut recurrent = 0usize;
    let mut on_lines = 0usize;
    let mut lines = 0usize;
    // upper triangle; the lower mirrors it and leaves every ratio unchanged
    for k in 1..n {
        let mut run = 0usize;
        for i in 0..=n - k {
            let hit = i < n - k && m[i * n + i + k];
            if hit {
                recurrent += 1;
                run += 1;
            } else {
                if run >= MIN_DIAGONAL {
                    on_lines += run;
                    lines += 1;
                }
                run = 0;
            }
        }
    }
    let (mut white_total, mut white_count, mut white_max) = (0usize, 0usize, 0usize);
    for j in 0..n {
        let mut run = 0usize;
        for i in 0..=n {
            let black = i == n || i == j || m[i * n + j];
            if black {
                if run > 0 {
                    white_total += run;
                    white_count += 1;
                    white_max = white_max.max(run);
                }
                run = 0;
            } else {
                run += 1;
            }
        }
    }
    let pairs = n * (n - 1) / 2;
    let recurrence_rate = recurrent as f64 / pairs as f64;
    let determinism = if recurrent > 0 { on_lines as f64 / recurrent as f64 } else { 0.0 };
    Some(Rqa {
        recurrence_rate,
        diag_rec: recurrence_rate * determinism,
        determinism,
        l: if lines > 0 { on_lines as f64 / lines as f64 } else { 0.0 },
        w: if white_count > 0 { white_total as f64 / white_count as f64 } else { 0.0 },
        wmax: white_max as f64,
    })
}

pub fn rqa(rr: &RRSeries) -> Option<Rqa> {
    let sd = sample_sd(&rr.nn_ms)?;
    let (n, m) = recurrence_matrix(&rr.nn_ms, RADIUS_SD * sd);
    rqa_from_matrix(n, &m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series() {
        let r = rqa(&RRSeries::from_nn(vec![800.0; 40])).unwrap();
        assert_eq!(r.recurrence_rate, 1.0);
        assert_eq!(r.wmax, 0.0);
    }

    #[test]
    fn periodic_series_is_deterministic() {
        let x: Vec<f64> = (0..41).map(|i| [800.0, 850.0, 900.0][i % 3]).collect();
        let r = rqa(&RRSeries::from_nn(x)).unwrap();
        assert_eq!(r.determinism, 1.0);
        assert!((r.diag_rec - r.recurrence_rate).abs() < 1e-15);
    }

    #[test]
    fn too_short() {
        assert!(rqa(&RRSeries::from_nn(vec![800.0, 810.0, 790.0])).is_none());
    }
}
