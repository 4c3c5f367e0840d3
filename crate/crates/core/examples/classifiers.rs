//! Train the six classifiers on one synthetic cohort and score them on
//! another, reporting AUROC and per-class recall.
//!
//!     cargo run --example classifiers

use anxbench::eval::EvalTuple;
use anxbench::features::{correlation_prune, drop_missing, extract_dataset, FeatureMatrix, MissingPolicy, PipelineConfig};
use anxbench::models::{train, ClassifierId, Hyper};
use anxbench::signal::{generate_cohort, CohortSpec};

fn cohort(id: &str, seed: u64) -> anxbench::Result<FeatureMatrix> {
    let spec = CohortSpec {
        dataset_id: id.into(),
        participants: 8,
        duration_s: 64.0,
        ..CohortSpec::default()
    };
    let c = generate_cohort(&spec, seed)?;
    let recs: Vec<_> = c.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
    Ok(drop_missing(&extract_dataset(&recs, &c.paq(), &PipelineConfig::default())?, MissingPolicy::ColumnsFirst))
}

fn main() -> anxbench::Result<()> {
    let train_m = cohort("train", 1)?;
    let test_m = cohort("test", 2)?;
    let train_m = correlation_prune(&train_m.retain_named(&test_m.columns), 0.75);
    let test_m = test_m.retain_named(&train_m.columns);

    let mut hyper = Hyper::default();
    hyper.mlp.epochs = 40;
    println!("{:<4} {:>7} {:>10} {:>14}", "", "AUROC", "recall A", "recall NA");
    for id in ClassifierId::ALL {
        let model = train(id, &train_m, &hyper, 42)?;
        let scores = model.predict_score(&test_m)?;
        let (t, _) = EvalTuple::from_scores(id, &scores, &test_m.targets());
        let f = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.3}"));
        println!("{id:<4} {:>7} {:>10} {:>14}", f(t.auroc), f(t.recall_anxious), f(t.recall_non_anxious));
    }
    Ok(())
}
