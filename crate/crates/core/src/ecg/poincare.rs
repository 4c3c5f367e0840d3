//! Poincaré-plot geometry, heart-rate asymmetry and fragmentation indices.
//!
//! The return map pairs each interval with its successor, `(nn[i], nn[i+1])`.
//! Points above the identity line are decelerations (the next interval is
//! longer).

use super::rr::RRSeries;
use crate::numeric::{finite, sample_sd};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Poincare {
    pub sd1: Option<f64>,
    pub sd2: Option<f64>,
    pub csi_modified: Option<f64>,
}

pub fn poincare(rr: &RRSeries) -> Poincare {
    let nn = &rr.nn_ms;
    if nn.len() < 3 {
        return Poincare::default();
    }
    let across: Vec<f64> = nn.windows(2).map(|w| (w[0] - w[1]) / std::f64::consts::SQRT_2).collect();
    let along: Vec<f64> = nn.windows(2).map(|w| (w[0] + w[1]) / std::f64::consts::SQRT_2).collect();
    let sd1 = sample_sd(&across);
    let sd2 = sample_sd(&along);
    let csi_modified = match (sd1, sd2) {
        (Some(s1), Some(s2)) if s1 > 0.0 => finite((4.0 * s2).powi(2) / (4.0 * s1)),
        _ => None,
    };
    Poincare { sd1, sd2, csi_modified }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Asymmetry {
    pub gi: Option<f64>,
    pub pi: Option<f64>,
    pub c1d: Option<f64>,
    pub c2d: Option<f64>,
}

/// Guzik index, Porta index and the deceleration contributions to short-
/// and long-term variance.
pub fn asymmetry(rr: &RRSeries) -> Asymmetry {
    let nn = &rr.nn_ms;
    if nn.len() < 2 {
        return Asymmetry::default();
    }
    let pts: Vec<(f64, f64)> = nn.windows(2).map(|w| (w[0], w[1])).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;

    let mut above = 0usize;
    let mut below = 0usize;
    let (mut d2_above, mut d2_all) = (0.0, 0.0);
    let (mut s2_dec, mut s2_acc, mut s2_flat) = (0.0, 0.0, 0.0);
    for &(x, y) in &pts {
        let across = (y - x) / std::f64::consts::SQRT_2;
        let along = ((x - mx) + (y - my)) / std::f64::consts::SQRT_2;
        if y > x {
            above += 1;
            d2_above += across * across;
            s2_dec += along * along;
        } else if y < x {
            below += 1;
            s2_acc += along * along;
        } else {
            s2_flat += along * along;
        }
        d2_all += across * across;
    }
    let off_line = above + below;
    if off_line == 0 {
        return Asymmetry::default();
    }
    let pi = 100.0 * below as f64 / off_line as f64;
    let gi = 100.0 * d2_above / d2_all;
    let c1d = d2_above / d2_all;
    let s2_total = s2_dec + s2_acc + s2_flat;
    let c2d = (s2_total > 0.0).then(|| (s2_dec + 0.5 * s2_flat) / s2_total);
    Asymmetry {
        gi: Some(gi),
        pi: Some(pi),
        c1d: Some(c1d),
        c2d,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Fragmentation {
    pub pip: Option<f64>,
    pub pas: Option<f64>,
}

/// PIP: share of interior intervals where successive differences change
/// sign (a zero difference counts as a change). PAS: share of intervals
/// covered by alternation runs of at least four differences.
pub fn fragmentation(rr: &RRSeries) -> Fragmentation {
    const MIN_ALTERNATION_DIFFS: usize = 4;
    let nn = &rr.nn_ms;
    let n = nn.len();
    if n < 3 {
        return Fragmentation::default();
    }
    let d: Vec<f64> = nn.windows(2).map(|w| w[1] - w[0]).collect();
    let changes: Vec<bool> = d.windows(2).map(|w| w[0] * w[1] <= 0.0).collect();
    let inflections = changes.iter().filter(|c| **c).count();
    let pip = 100.0 * inflections as f64 / (n - 2) as f64;

    let mut covered = vec![false; n];
    let mut run_start = 0;
    for j in 1..=d.len() {
        let continues = j < d.len() && changes[j - 1];
        if !continues {
            let run_len = j - run_start;
            if run_len >= MIN_ALTERNATION_DIFFS {
                covered[run_start..=j].iter_mut().for_each(|c| *c = true);
            }
            run_start = j;
        }
    }
    let pas = 100.0 * covered.iter().filter(|c| **c).count() as f64 / n as f64;
    Fragmentation {
        pip: Some(pip),
        pas: Some(pas),
    }
}
