use std::collections::BTreeMap;

use anxbench::eval::{
    auroc, run_cell, run_matrix, select_best, Confusion, EvalOptions, EvalTuple, FoldUnit, TrainTestConfig,
    MIN_NON_ANXIOUS_RECALL,
};
use anxbench::features::{enumerate_combos, full_schema, FeatureCombo, FeatureMatrix, FeatureSet, GroupKey, Label};
use anxbench::models::{ClassifierId, Hyper};
use anxbench::seed::rng;
use ndarray::Array2;
use proptest::prelude::*;
use rand_distr::{Distribution, Normal};

/// Gaussian classes `shift` apart on every column, 6 participants.
fn gaussian_matrix(id: &str, rows: usize, shift: f64, seed: u64) -> FeatureMatrix {
    let cols = full_schema();
    let mut r = rng(seed);
    let noise = Normal::new(0.0, 1.0).unwrap();
    let labels: Vec<Label> = (0..rows).map(|i| Label::from_bool(i % 2 == 0)).collect();
    let data = Array2::from_shape_fn((rows, cols.len()), |(i, _)| {
        noise.sample(&mut r) + if labels[i].is_anxious() { shift } else { 0.0 }
    });
    let groups = (0..rows).map(|i| GroupKey::new(id, format!("p{}", i % 6), "a")).collect();
    FeatureMatrix::new(cols, data, labels, groups).unwrap()
}

fn quick_hyper() -> Hyper {
    let mut h = Hyper::default();
    h.forest.n_trees = 15;
    h.boost.n_trees = 15;
    h
}

fn recalls_of(c: &Confusion) -> (Option<f64>, Option<f64>) {
    let pct = |num: usize, den: usize| (den > 0).then(|| 100.0 * num as f64 / den as f64);
    (pct(c.tp, c.tp + c.fn_), pct(c.tn, c.tn + c.fp))
}

#[test]
fn report_is_independent_of_worker_count() {
    let datasets = BTreeMap::from([
        ("A".to_string(), gaussian_matrix("A", 60, 0.6, 1)),
        ("B".to_string(), gaussian_matrix("B", 60, 0.6, 2)),
    ]);
    let configs = [TrainTestConfig::within("A"), TrainTestConfig::cross(&["A"], "B")];
    let combos = &enumerate_combos()[..7];
    let opts = EvalOptions {
        folds: 3,
        ..EvalOptions::default()
    };
    let run = |w| run_matrix(&configs, combos, &ClassifierId::CLASSICAL, &datasets, &quick_hyper(), &opts, 4, w).unwrap();
    let one = run(1);
    assert_eq!(one.model_count, 2 * 7 * 5);
    assert_eq!(one, run(3));
    assert_eq!(one.to_json().unwrap(), run(2).to_json().unwrap());
}

#[test]
fn within_cell_averages_its_stored_folds() {
    let datasets = BTreeMap::from([("A".to_string(), gaussian_matrix("A", 90, 0.8, 3))]);
    for unit in [FoldUnit::Window, FoldUnit::Participant] {
        let opts = EvalOptions { folds: 5, fold_unit: unit };
        let cell = run_cell(
            &TrainTestConfig::within("A"),
            FeatureCombo::single(FeatureSet::F1),
            &ClassifierId::CLASSICAL,
            &datasets,
            &quick_hyper(),
            &opts,
            8,
        )
        .unwrap();
        for cand in &cell.candidates {
            assert_eq!(cand.folds.len(), 5);
            let tested: usize = cand.folds.iter().map(|(_, c)| c.total()).sum();
            assert_eq!(tested, 90, "every row is tested exactly once");
            for (t, c) in &cand.folds {
                assert_eq!((t.recall_anxious, t.recall_non_anxious), recalls_of(c));
            }
            // Undefined fold values (a single-class test fold) are skipped.
            let mean = |f: fn(&EvalTuple) -> Option<f64>| {
                let v: Vec<f64> = cand.folds.iter().filter_map(|(t, _)| f(t)).collect();
                (!v.is_empty()).then(|| v.iter().sum::<f64>() / v.len() as f64)
            };
            let t = cand.tuple;
            let pairs = [
                (t.auroc, mean(|t| t.auroc)),
                (t.recall_anxious, mean(|t| t.recall_anxious)),
                (t.recall_non_anxious, mean(|t| t.recall_non_anxious)),
            ];
            for (got, want) in pairs {
                assert_eq!(got.is_some(), want.is_some());
                if let (Some(g), Some(w)) = (got, want) {
                    assert!((g - w).abs() < 1e-12);
                }
            }
        }
        let tuples: Vec<EvalTuple> = cell.candidates.iter().map(|c| c.tuple).collect();
        assert_eq!(cell.selected, select_best(&tuples));
    }
}

#[test]
fn cross_matches_within_when_datasets_share_a_distribution() {
    let datasets = BTreeMap::from([
        ("A".to_string(), gaussian_matrix("A", 400, 0.35, 5)),
        ("B".to_string(), gaussian_matrix("B", 400, 0.35, 6)),
    ]);
    let combos = [FeatureCombo::single(FeatureSet::F1)];
    let configs = [TrainTestConfig::within("B"), TrainTestConfig::cross(&["A"], "B")];
    let report = run_matrix(
        &configs,
        &combos,
        &[ClassifierId::C1],
        &datasets,
        &Hyper::default(),
        &EvalOptions::default(),
        1,
        0,
    )
    .unwrap();
    let within = report.records[0].auroc.unwrap();
    let cross = report.records[1].auroc.unwrap();
    assert!(within > 0.7, "within {within}");
    assert!((within - cross).abs() <= 0.05, "within {within}, cross {cross}");
}

#[test]
fn separable_data_scores_near_perfect_within() {
    let datasets = BTreeMap::from([("A".to_string(), gaussian_matrix("A", 120, 3.0, 7))]);
    let report = run_matrix(
        &[TrainTestConfig::within("A")],
        &[FeatureCombo::single(FeatureSet::F2)],
        &ClassifierId::CLASSICAL,
        &datasets,
        &quick_hyper(),
        &EvalOptions::default(),
        2,
        1,
    )
    .unwrap();
    for r in &report.records {
        assert!(r.auroc.unwrap() >= 0.95, "{} AUROC {:?}", r.classifier, r.auroc);
    }
    assert_eq!(report.records.iter().filter(|r| r.selected).count(), 1);
    assert_eq!(report.records.iter().filter(|r| r.best_in_column).count(), 1);
}

#[test]
fn undefined_dataset_is_a_config_error() {
    let datasets = BTreeMap::from([("A".to_string(), gaussian_matrix("A", 20, 1.0, 1))]);
    let e = run_matrix(
        &[TrainTestConfig::cross(&["A"], "Z")],
        &[FeatureCombo::single(FeatureSet::F1)],
        &[ClassifierId::C1],
        &datasets,
        &Hyper::default(),
        &EvalOptions::default(),
        1,
        1,
    )
    .unwrap_err();
    assert_eq!(anxbench::app::exit_code(&e), 1);
}

fn classifier(k: usize) -> ClassifierId {
    ClassifierId::ALL[k % ClassifierId::ALL.len()]
}

proptest! {
    #[test]
    fn auroc_is_invariant_under_increasing_maps(
        pts in prop::collection::vec((-50i32..50, any::<bool>()), 2..120),
    ) {
        let scores: Vec<f64> = pts.iter().map(|p| f64::from(p.0)).collect();
        let y: Vec<bool> = pts.iter().map(|p| p.1).collect();
        let base = auroc(&scores, &y);
        let cubed: Vec<f64> = scores.iter().map(|s| s.powi(3) + 7.0).collect();
        let squashed: Vec<f64> = scores.iter().map(|s| 1.0 / (1.0 + (-s / 10.0).exp())).collect();
        prop_assert_eq!(base, auroc(&cubed, &y));
        prop_assert_eq!(base, auroc(&squashed, &y));
        let flipped: Vec<f64> = scores.iter().map(|s| -s).collect();
        if let (Some(a), Some(b)) = (base, auroc(&flipped, &y)) {
            prop_assert!((a + b - 1.0).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&a));
        }
    }

    #[test]
    fn selection_respects_the_recall_gate(
        cands in prop::collection::vec((0.0f64..=100.0, 0.0f64..=100.0, 0.0f64..=1.0), 1..8),
    ) {
        let tuples: Vec<EvalTuple> = cands
            .iter()
            .enumerate()
            .map(|(k, c)| EvalTuple {
                auroc: Some(c.2),
                recall_anxious: Some(c.0),
                recall_non_anxious: Some(c.1),
                classifier: classifier(k),
            })
            .collect();
        let admissible: Vec<&EvalTuple> =
            tuples.iter().filter(|t| t.recall_non_anxious.unwrap() >= MIN_NON_ANXIOUS_RECALL).collect();
        match select_best(&tuples) {
            None => prop_assert!(admissible.is_empty()),
            Some(best) => {
                prop_assert!(best.recall_non_anxious.unwrap() >= MIN_NON_ANXIOUS_RECALL);
                for t in admissible {
                    prop_assert!(t.recall_anxious <= best.recall_anxious);
                }
            }
        }
    }
}
