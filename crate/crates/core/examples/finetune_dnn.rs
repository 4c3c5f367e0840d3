//! Train the dense network on one cohort, then fine-tune it on a shifted
//! cohort with a 70/15/15 split and early selection by validation loss.
//!
//!     cargo run --example finetune_dnn

use anxbench::features::{drop_missing, extract_dataset, FeatureMatrix, MissingPolicy, PipelineConfig};
use anxbench::models::{finetune_mlp, train, ClassifierId, Hyper};
use anxbench::signal::{generate_cohort, CohortSpec, Physiology};

fn cohort(id: &str, physiology: Physiology) -> anxbench::Result<FeatureMatrix> {
    let spec = CohortSpec {
        dataset_id: id.into(),
        participants: 8,
        duration_s: 64.0,
        physiology,
        ..CohortSpec::default()
    };
    let c = generate_cohort(&spec, 3)?;
    let recs: Vec<_> = c.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
    Ok(drop_missing(&extract_dataset(&recs, &c.paq(), &PipelineConfig::default())?, MissingPolicy::ColumnsFirst))
}

fn main() -> anxbench::Result<()> {
    let source = cohort("source", Physiology::default())?;
    let target = cohort(
        "target",
        Physiology {
            anxious_hr_delta: 6.0,
            base_hr: 80.0,
            ..Physiology::default()
        },
    )?
    .retain_named(&source.columns);
    let source = source.retain_named(&target.columns);

    let mut hyper = Hyper::default();
    hyper.mlp.epochs = 30;
    hyper.mlp.learning_rate = 1e-3;
    let model = train(ClassifierId::Dnn, &source, &hyper, 42)?;
    let report = finetune_mlp(&model, &target, &hyper.mlp, 42)?;
    let f = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.3}"));
    println!("test AUROC before fine-tuning {}", f(report.before.auroc));
    println!("test AUROC after fine-tuning  {} (best epoch {})", f(report.test.auroc), report.best_epoch);
    Ok(())
}
