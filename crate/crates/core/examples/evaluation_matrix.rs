//! Run a small within/cross-dataset matrix and print the selected model of
//! every cell.
//!
//!     cargo run --example evaluation_matrix

use std::collections::BTreeMap;

use anxbench::eval::{run_matrix, EvalOptions, TrainTestConfig};
use anxbench::features::{drop_missing, extract_dataset, FeatureCombo, FeatureMatrix, FeatureSet, MissingPolicy, PipelineConfig};
use anxbench::models::{ClassifierId, Hyper};
use anxbench::signal::{generate_cohort, CohortSpec};

fn cohort(id: &str) -> anxbench::Result<FeatureMatrix> {
    let spec = CohortSpec {
        dataset_id: id.into(),
        participants: 6,
        duration_s: 64.0,
        ..CohortSpec::default()
    };
    let c = generate_cohort(&spec, 5)?;
    let recs: Vec<_> = c.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
    Ok(drop_missing(&extract_dataset(&recs, &c.paq(), &PipelineConfig::default())?, MissingPolicy::ColumnsFirst))
}

fn main() -> anxbench::Result<()> {
    let a = cohort("A")?;
    let b = cohort("B")?.retain_named(&a.columns);
    let a = a.retain_named(&b.columns);
    let datasets = BTreeMap::from([("A".to_string(), a), ("B".to_string(), b)]);
    let configs = [
        TrainTestConfig::within("A"),
        TrainTestConfig::within("B"),
        TrainTestConfig::cross(&["A"], "B"),
        TrainTestConfig::cross(&["B"], "A"),
    ];
    let combos = [
        FeatureCombo::single(FeatureSet::F1),
        FeatureCombo::single(FeatureSet::F5),
        FeatureCombo::new(&[FeatureSet::F1, FeatureSet::F5])?,
    ];
    let report = run_matrix(
        &configs,
        &combos,
        &ClassifierId::CLASSICAL,
        &datasets,
        &Hyper::default(),
        &EvalOptions::default(),
        42,
        0,
    )?;
    print!("{}", report.to_table());
    Ok(())
}
