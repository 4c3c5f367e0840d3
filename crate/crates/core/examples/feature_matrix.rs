//! Generate a synthetic cohort, extract windowed features, clean and prune
//! the matrix and write it as CSV.
//!
//!     cargo run --example feature_matrix -- /tmp/cohort.csv

use anxbench::features::{correlation_prune, drop_missing, extract_dataset, MissingPolicy, PipelineConfig, CORRELATION_THRESHOLD};
use anxbench::signal::{generate_cohort, CohortSpec};

fn main() -> anxbench::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "cohort_features.csv".into());
    let spec = CohortSpec {
        dataset_id: "S1".into(),
        participants: 4,
        activities: vec!["speech".into(), "bug_box".into()],
        duration_s: 66.0,
        ..CohortSpec::default()
    };
    let cohort = generate_cohort(&spec, 42)?;
    let recordings: Vec<_> = cohort.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
    let raw = extract_dataset(&recordings, &cohort.paq(), &PipelineConfig::default())?;
    let (ac, nac) = raw.class_counts();
    println!("{} windows ({ac} anxious, {nac} non-anxious) × {} features", raw.n_rows(), raw.n_cols());

    let clean = drop_missing(&raw, MissingPolicy::ColumnsFirst);
    println!("after missing-value removal: {} × {}", clean.n_rows(), clean.n_cols());
    let pruned = correlation_prune(&clean, CORRELATION_THRESHOLD);
    println!("after correlation pruning at {CORRELATION_THRESHOLD}: {} features", pruned.n_cols());
    for c in &pruned.columns {
        println!("  {c}");
    }
    raw.save_csv(&out)?;
    println!("raw matrix written to {out}");
    Ok(())
}
