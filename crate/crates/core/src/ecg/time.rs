use super::rr::RRSeries;
use crate::numeric::{mean, median, min, sample_sd};

pub const TINN_BIN_MS: f64 = 7.8125;
pub const TINN_MIN_INTERVALS: usize = 20;
const MAD_SCALE: f64 = 1.4826;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TimeDomain {
    pub mean_nn: Option<f64>,
    pub sdnn: Option<f64>,
    pub mad_nn: Option<f64>,
    pub min_nn: Option<f64>,
    pub tinn: Option<f64>,
}

impl TimeDomain {
    pub fn values(&self) -> [Option<f64>; 5] {
        [self.mean_nn, self.sdnn, self.mad_nn, self.min_nn, self.tinn]
    }
}

pub fn time_domain(rr: &RRSeries) -> TimeDomain {
    let nn = &rr.nn_ms;
    let mad_nn = median(nn).and_then(|m| {
        let dev: Vec<f64> = nn.iter().map(|v| (v - m).abs()).collect();
        median(&dev).map(|d| MAD_SCALE * d)
    });
    TimeDomain {
        mean_nn: mean(nn),
        sdnn: sample_sd(nn),
        mad_nn,
        min_nn: min(nn),
        tinn: tinn(nn),
    }
}

/// Baseline width (ms) of the triangle that best fits the NN histogram in the
/// least-squares sense. The apex sits on the modal bin; the two base points
/// range over bin centres (plus one bin beyond each end).
pub fn tinn(nn: &[f64]) -> Option<f64> {
    if nn.len() < TINN_MIN_INTERVALS {
        return None;
    }
    let lo = min(nn)?;
    let hi = nn.iter().copied().fold(f64::MIN, f64::max);
    let w = TINN_BIN_MS;
    let bins = ((hi - lo) / w).floor() as usize + 1;
    let mut counts = vec![0.0; bins];
    for v in nn {
        let j = (((v - lo) / w).floor() as usize).min(bins - 1);
        counts[j] += 1.0;
    }
    let centre = |j: isize| lo + (j as f64 + 0.5) * w;
    let apex = counts
        .iter()
        .enumerate()
        .fold(0, |best, (j, c)| if *c > counts[best] { j } else { best });
    let x = centre(apex as isize);
    let y = counts[apex];

    let mut best: Option<(f64, f64)> = None;
    for n_idx in -1..apex as isize {
        let n_pos = centre(n_idx);
        for m_idx in apex as isize + 1..=bins as isize {
            let m_pos = centre(m_idx);
            let err: f64 = counts
                .iter()
                .enumerate()
                .map(|(j, d)| {
                    let c = centre(j as isize);
                    let q = if c <= n_pos || c >= m_pos {
                        0.0
                    } else if c <= x {
                        y * (c - n_pos) / (x - n_pos)
                    } else {
                        y * (m_pos - c) / (m_pos - x)
                    };
                    (d - q).powi(2)
                })
                .sum();
            if best.is_none_or(|(e, _)| err < e) {
                best = Some((err, m_pos - n_pos));
            }
        }
    }
    best.map(|(_, width)| width)
}
