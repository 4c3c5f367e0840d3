use serde::{Deserialize, Serialize};

use crate::models::ClassifierId;

/// Counts with Anxious as the positive class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub fp: usize,
    pub tn: usize,
}

impl Confusion {
    pub fn total(&self) -> usize {
        self.tp + self.fn_ + self.fp + self.tn
    }

    /// (anxious recall %, non-anxious recall %); a class with no rows gives `None`.
    pub fn recalls(&self) -> (Option<f64>, Option<f64>) {
        recalls(self)
    }

    pub fn accuracy(&self) -> Option<f64> {
        let n = self.total();
        (n > 0).then(|| 100.0 * (self.tp + self.tn) as f64 / n as f64)
    }
}

pub fn confusion(y_true: &[bool], y_pred: &[bool]) -> Confusion {
    let mut c = Confusion::default();
    for (&t, &p) in y_true.iter().zip(y_pred) {
        match (t, p) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    c
}

pub fn recalls(c: &Confusion) -> (Option<f64>, Option<f64>) {
    let pct = |num: usize, den: usize| (den > 0).then(|| 100.0 * num as f64 / den as f64);
    (pct(c.tp, c.tp + c.fn_), pct(c.tn, c.tn + c.fp))
}

/// Probability that a random Anxious row outscores a random NonAnxious one,
/// ties counting half (rank-sum form). `None` without both classes.
pub fn auroc(scores: &[f64], y_true: &[bool]) -> Option<f64> {
    let n_pos = y_true.iter().filter(|b| **b).count();
    let n_neg = y_true.len() - n_pos;
    if n_pos == 0 || n_neg == 0 || scores.len() != y_true.len() {
        return None;
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let mut rank_sum = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && scores[order[j + 1]] == scores[order[i]] {
            j += 1;
        }
        // 1-based average rank of the tie group
        let rank = (i + j) as f64 / 2.0 + 1.0;
        let pos_in_group = order[i..=j].iter().filter(|&&k| y_true[k]).count();
        rank_sum += rank * pos_in_group as f64;
        i = j + 1;
    }
    let u = rank_sum - (n_pos * (n_pos + 1)) as f64 / 2.0;
    Some(u / (n_pos as f64 * n_neg as f64))
}

/// The reporting unit: AUROC, recall of each class (%) and the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalTuple {
    pub auroc: Option<f64>,
    pub recall_anxious: Option<f64>,
    pub recall_non_anxious: Option<f64>,
    pub classifier: ClassifierId,
}

impl EvalTuple {
    pub fn from_scores(classifier: ClassifierId, scores: &[f64], y_true: &[bool]) -> (Self, Confusion) {
        let t = classifier.threshold();
        let pred: Vec<bool> = scores.iter().map(|s| *s >= t).collect();
        let c = confusion(y_true, &pred);
        let (ra, rn) = c.recalls();
        (
            Self {
                auroc: auroc(scores, y_true),
                recall_anxious: ra,
                recall_non_anxious: rn,
                classifier,
            },
            c,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reported_confusion() {
        let c = Confusion {
            tp: 8,
            fn_: 188,
            fp: 13,
            tn: 494,
        };
        let (a, n) = c.recalls();
        assert!((a.unwrap() - 4.08).abs() < 0.01);
        assert!((n.unwrap() - 97.44).abs() < 0.01);
        assert!((c.accuracy().unwrap() - 71.0).abs() < 1.0);
    }

    #[test]
    fn perfect_and_all_negative() {
        let y: Vec<bool> = (0..20).map(|i| i < 10).collect();
        let c = confusion(&y, &y);
        assert_eq!((c.tp, c.tn, c.fp, c.fn_), (10, 10, 0, 0));
        let c = confusion(&y, &[false; 20]);
        assert_eq!(c.recalls(), (Some(0.0), Some(100.0)));
    }

    #[test]
    fn auroc_examples() {
        assert_eq!(auroc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]), Some(0.75));
        assert_eq!(auroc(&[0.1, 0.2, 0.8, 0.9], &[false, false, true, true]), Some(1.0));
        assert_eq!(auroc(&[0.5; 6], &[false, true, false, true, true, false]), Some(0.5));
        assert_eq!(auroc(&[0.1, 0.2], &[true, true]), None);
    }
}
