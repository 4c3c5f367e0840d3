use std::cmp::Ordering;

use super::metrics::EvalTuple;
use crate::features::{enumerate_combos, FeatureCombo};

pub const MIN_NON_ANXIOUS_RECALL: f64 = 50.0;

fn cmp_opt(a: Option<f64>, b: Option<f64>) -> Ordering {
    match (a, b) {
        (Some(x), Some(y)) => x.total_cmp(&y),
        (Some(_), None) => Ordering::Greater,
        (None, Some(_)) => Ordering::Less,
        (None, None) => Ordering::Equal,
    }
}

/// Among candidates with non-anxious recall ≥ 50%, the highest anxious
/// recall; ties go to higher AUROC, then the lower classifier index.
pub fn select_best(candidates: &[EvalTuple]) -> Option<EvalTuple> {
    candidates
        .iter()
        .filter(|c| c.recall_non_anxious.is_some_and(|r| r >= MIN_NON_ANXIOUS_RECALL))
        .max_by(|a, b| {
            cmp_opt(a.recall_anxious, b.recall_anxious)
                .then(cmp_opt(a.auroc, b.auroc))
                .then(b.classifier.cmp(&a.classifier))
        })
        .copied()
}

/// Highest AUROC across combinations; ties go to higher anxious recall,
/// then the earlier combination in canonical order.
pub fn select_best_combo(per_combo: &[(FeatureCombo, EvalTuple)]) -> Option<(FeatureCombo, EvalTuple)> {
    let order = enumerate_combos();
    let rank = |c: &FeatureCombo| order.iter().position(|o| o == c).unwrap_or(usize::MAX);
    per_combo
        .iter()
        .max_by(|(ca, a), (cb, b)| {
            cmp_opt(a.auroc, b.auroc)
                .then(cmp_opt(a.recall_anxious, b.recall_anxious))
                .then(rank(cb).cmp(&rank(ca)))
        })
        .copied()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::FeatureSet;
    use crate::models::ClassifierId;

    fn t(auroc: Option<f64>, ra: f64, rn: f64, c: ClassifierId) -> EvalTuple {
        EvalTuple {
            auroc,
            recall_anxious: Some(ra),
            recall_non_anxious: Some(rn),
            classifier: c,
        }
    }

    #[test]
    fn prefers_gated_candidate() {
        let cands = [t(Some(0.6), 80.0, 20.0, ClassifierId::C1), t(Some(0.6), 65.0, 55.0, ClassifierId::C2)];
        assert_eq!(select_best(&cands).unwrap().classifier, ClassifierId::C2);
    }

    #[test]
    fn none_when_all_below_gate() {
        let cands = [t(Some(0.9), 90.0, 49.9, ClassifierId::C1), t(Some(0.7), 60.0, 10.0, ClassifierId::C2)];
        assert_eq!(select_best(&cands), None);
    }

    #[test]
    fn singleton_and_ties() {
        let one = t(Some(0.7), 60.0, 60.0, ClassifierId::C3);
        assert_eq!(select_best(&[one]), Some(one));
        let a = t(Some(0.7), 60.0, 60.0, ClassifierId::C4);
        let b = t(Some(0.7), 60.0, 70.0, ClassifierId::C2);
        assert_eq!(select_best(&[a, b]).unwrap().classifier, ClassifierId::C2);
    }

    #[test]
    fn combo_rules() {
        let f1 = FeatureCombo::single(FeatureSet::F1);
        let f2 = FeatureCombo::single(FeatureSet::F2);
        let r = select_best_combo(&[(f1, t(Some(0.80), 50.0, 60.0, ClassifierId::C1)), (f2, t(Some(0.82), 50.0, 60.0, ClassifierId::C1))]);
        assert_eq!(r.unwrap().0, f2);
        let r = select_best_combo(&[(f1, t(Some(0.80), 70.0, 60.0, ClassifierId::C1)), (f2, t(Some(0.80), 75.0, 60.0, ClassifierId::C1))]);
        assert_eq!(r.unwrap().0, f2);
        let r = select_best_combo(&[(f2, t(Some(0.80), 70.0, 60.0, ClassifierId::C1)), (f1, t(Some(0.80), 70.0, 60.0, ClassifierId::C1))]);
        assert_eq!(r.unwrap().0, f1);
        assert_eq!(select_best_combo(&[]), None);
    }
}
