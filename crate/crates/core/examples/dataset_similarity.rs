//! Entropic and exact optimal transport on a small problem, then the
//! per-feature-set dataset distance between two synthetic cohorts.
//!
//!     cargo run --example dataset_similarity

use anxbench::features::{drop_missing, extract_dataset, FeatureMatrix, MissingPolicy, PipelineConfig};
use anxbench::signal::{generate_cohort, CohortSpec, Physiology};
use anxbench::similarity::{exact_ot_small, otdd_per_set, sinkhorn, OtddParams, TransportProblem};
use ndarray::Array2;

fn cohort(id: &str, physiology: Physiology) -> anxbench::Result<FeatureMatrix> {
    let spec = CohortSpec {
        dataset_id: id.into(),
        participants: 6,
        duration_s: 64.0,
        physiology,
        ..CohortSpec::default()
    };
    let c = generate_cohort(&spec, 11)?;
    let recs: Vec<_> = c.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
    Ok(drop_missing(&extract_dataset(&recs, &c.paq(), &PipelineConfig::default())?, MissingPolicy::ColumnsFirst))
}

fn main() -> anxbench::Result<()> {
    let x = [0.0, 1.0, 2.5, 4.0];
    let y = [0.5, 1.5, 3.0, 6.0];
    let cost = Array2::from_shape_fn((4, 4), |(i, j)| (x[i] - y[j]) * (x[i] - y[j]));
    let p = TransportProblem::uniform(cost, 1e-2)?;
    let s = sinkhorn(&p)?;
    let e = exact_ot_small(&p)?;
    println!("sinkhorn {:.6} ({} sweeps, converged {}), exact {:.6}", s.distance, s.iterations, s.converged, e.distance);

    let a = cohort("calm-lab", Physiology::default())?;
    let shifted = Physiology {
        base_hr: 85.0,
        tonic_level: 7.0,
        ..Physiology::default()
    };
    let b = cohort("field", shifted)?.retain_named(&a.columns);
    let a = a.retain_named(&b.columns);
    for (set, d) in otdd_per_set(&a, &b, &OtddParams::default(), 42)? {
        println!("{set}: {}", d.map_or("-".into(), |d| format!("{d:.4}")));
    }
    Ok(())
}
