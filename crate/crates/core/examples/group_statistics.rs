//! Welch t-statistic, p-value and Cohen's d of every feature between
//! anxious and non-anxious windows.
//!
//!     cargo run --example group_statistics

use anxbench::eval::group_stats;
use anxbench::features::{drop_missing, extract_dataset, Label, MissingPolicy, PipelineConfig};
use anxbench::signal::{generate_cohort, CohortSpec};

fn main() -> anxbench::Result<()> {
    let spec = CohortSpec {
        participants: 6,
        duration_s: 64.0,
        ..CohortSpec::default()
    };
    let c = generate_cohort(&spec, 9)?;
    let recs: Vec<_> = c.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
    let m = drop_missing(&extract_dataset(&recs, &c.paq(), &PipelineConfig::default())?, MissingPolicy::ColumnsFirst);
    println!("{:<28} {:>9} {:>9} {:>10}", "feature", "t", "d", "p");
    for (k, col) in m.columns.iter().enumerate() {
        let pick = |want: Label| -> Vec<f64> {
            (0..m.n_rows()).filter(|&r| m.labels[r] == want).map(|r| m.data[[r, k]]).collect()
        };
        let s = group_stats(&pick(Label::Anxious), &pick(Label::NonAnxious));
        let f = |v: Option<f64>, p: usize| v.map_or("-".into(), |v| format!("{v:.p$}"));
        println!("{:<28} {:>9} {:>9} {:>10}", col.to_string(), f(s.t_statistic, 3), f(s.cohens_d, 3), f(s.p_value, 6));
    }
    Ok(())
}
