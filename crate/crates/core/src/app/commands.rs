use std::collections::BTreeMap;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::config::{DatasetConfig, PruneMode, RunConfig};
use crate::error::{Error, Result};
use crate::eval::{run_matrix, MatrixReport};
use crate::features::{
    correlation_keep, correlation_keep_per_part, drop_missing, extract_dataset, FeatureMatrix, FeatureSet,
};
use crate::models::{train, ClassifierId};
use crate::signal::{generate_cohort, load_paq, load_recording, CohortSpec, SyntheticCohort};
use crate::similarity::otdd_per_set;

fn cohort(d: &DatasetConfig, spec: &CohortSpec, seed: u64) -> Result<SyntheticCohort> {
    let spec = CohortSpec {
        dataset_id: d.id.clone(),
        ..spec.clone()
    };
    generate_cohort(&spec, seed)
}

fn load_raw_dir(id: &str, dir: &Path) -> Result<(Vec<crate::signal::RawRecording>, Vec<crate::signal::PaqResponses>)> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Error::Data(format!("{}: {e}", dir.display())))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.sort();
    let paq_path = dir.join("paq.csv");
    let paq = match load_paq(&paq_path) {
        Ok(p) => p,
        Err(Error::Csv(e)) if matches!(e.kind(), csv::ErrorKind::Io(io) if io.kind() == ErrorKind::NotFound) => {
            return Err(Error::LabelsUnavailable(format!("dataset {id}: {} not found", paq_path.display())));
        }
        Err(e) => return Err(e),
    };
    let mut recordings = Vec::new();
    for f in files {
        if f == paq_path || f.extension().is_none_or(|e| e != "csv") {
            continue;
        }
        let mut r = load_recording(&f)?;
        r.dataset_id = id.to_string();
        recordings.push(r);
    }
    Ok((recordings, paq))
}

/// The raw (uncleaned) feature matrix of one dataset.
pub fn dataset_matrix(cfg: &RunConfig, d: &DatasetConfig) -> Result<FeatureMatrix> {
    let seed = cfg.seed()?;
    if let Some(path) = &d.features {
        return FeatureMatrix::load_csv(cfg.resolve(path));
    }
    let (recordings, paq) = if let Some(dir) = &d.raw_dir {
        load_raw_dir(&d.id, &cfg.resolve(dir))?
    } else if let Some(spec) = &d.synthetic {
        let c = cohort(d, spec, seed)?;
        let recs = c.sessions.iter().flat_map(|s| [s.ecg.clone(), s.eda.clone()]).collect();
        (recs, c.paq())
    } else {
        return Err(Error::Config(format!("dataset {:?} has no source", d.id)));
    };
    extract_dataset(&recordings, &paq, &cfg.pipeline)
}

/// Cleaned matrices sharing one schema: per-dataset missing-value removal,
/// the intersection of surviving columns, then correlation pruning.
pub fn prepare(cfg: &RunConfig, ids: &[&str]) -> Result<BTreeMap<String, FeatureMatrix>> {
    let raw: Vec<FeatureMatrix> = ids
        .par_iter()
        .map(|id| cfg.dataset(id).and_then(|d| dataset_matrix(cfg, d)))
        .collect::<Result<_>>()?;
    let cleaned: Vec<FeatureMatrix> = raw.iter().map(|m| drop_missing(m, cfg.clean.missing)).collect();
    for (id, m) in ids.iter().zip(&cleaned) {
        if m.n_rows() == 0 {
            return Err(Error::Data(format!("dataset {id} has no usable rows after missing-value removal")));
        }
    }
    let shared: Vec<_> = cleaned[0]
        .columns
        .iter()
        .filter(|c| cleaned[1..].iter().all(|m| m.columns.contains(c)))
        .cloned()
        .collect();
    let aligned: Vec<FeatureMatrix> = cleaned.iter().map(|m| m.retain_named(&shared)).collect();
    let all = FeatureMatrix::concat(&aligned.iter().collect::<Vec<_>>())?;
    let thr = cfg.clean.correlation_threshold;
    let keep = match cfg.clean.prune {
        PruneMode::Global => correlation_keep(&all.data, thr)
            .into_iter()
            .map(|c| all.columns[c].clone())
            .collect(),
        PruneMode::PerActivity => {
            let mut activities: Vec<&str> = all.groups.iter().map(|g| g.activity.as_str()).collect();
            activities.sort_unstable();
            activities.dedup();
            let parts: Vec<FeatureMatrix> = activities
                .iter()
                .map(|a| all.filter_rows(|g, _| g.activity == *a))
                .collect();
            correlation_keep_per_part(&parts.iter().collect::<Vec<_>>(), thr)
        }
    };
    if keep.is_empty() {
        return Err(Error::Data("no feature columns survive cleaning".into()));
    }
    Ok(ids
        .iter()
        .zip(&aligned)
        .map(|(id, m)| (id.to_string(), m.retain_named(&keep)))
        .collect())
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Data(format!("{}: {e}", dir.display())))
}

/// Writes the raw files of every synthetic dataset to `<out>/raw/<id>/`.
pub fn cmd_synth(cfg: &RunConfig) -> Result<Vec<String>> {
    let seed = cfg.seed()?;
    let mut lines = Vec::new();
    for d in &cfg.datasets {
        let Some(spec) = &d.synthetic else { continue };
        let c = cohort(d, spec, seed)?;
        let dir = cfg.out_dir().join("raw").join(&d.id);
        c.write_to(&dir)?;
        let anxious = c.sessions.iter().filter(|s| s.anxious).count();
        lines.push(format!(
            "{}: {} sessions ({} anxious) -> {}",
            d.id,
            c.sessions.len(),
            anxious,
            dir.display()
        ));
    }
    if lines.is_empty() {
        return Err(Error::Config("no dataset has a [datasets.synthetic] section".into()));
    }
    Ok(lines)
}

/// Extracts one matrix file per dataset into `<out>/features/` and reports
/// anxious (AC) and non-anxious (NAC) window counts.
pub fn cmd_features(cfg: &RunConfig) -> Result<Vec<String>> {
    if cfg.datasets.is_empty() {
        return Err(Error::Config("no datasets defined".into()));
    }
    let dir = cfg.out_dir().join("features");
    create_dir(&dir)?;
    let mut lines = vec![format!("{:<12} {:>8} {:>8} {:>8}", "dataset", "AC", "NAC", "windows")];
    for d in &cfg.datasets {
        let m = dataset_matrix(cfg, d)?;
        m.save_csv(dir.join(format!("{}.csv", d.id)))?;
        let (ac, nac) = m.class_counts();
        lines.push(format!("{:<12} {:>8} {:>8} {:>8}", d.id, ac, nac, m.n_rows()));
    }
    Ok(lines)
}

fn referenced_ids(cfg: &RunConfig) -> Vec<&str> {
    let mut ids: Vec<&str> = cfg
        .matrix
        .configs
        .iter()
        .flat_map(|c| c.train.iter().chain(std::iter::once(&c.test)))
        .map(String::as_str)
        .collect();
    ids.sort_unstable();
    ids.dedup();
    ids
}

pub fn matrix_report(cfg: &RunConfig) -> Result<MatrixReport> {
    if cfg.matrix.configs.is_empty() {
        return Err(Error::Config("matrix definition is empty".into()));
    }
    let seed = cfg.seed()?;
    let datasets = prepare(cfg, &referenced_ids(cfg))?;
    run_matrix(
        &cfg.matrix.configs,
        &cfg.matrix.combos.resolve()?,
        &cfg.matrix.classifiers,
        &datasets,
        &cfg.hyper,
        &cfg.eval,
        seed,
        cfg.workers(),
    )
}

/// Runs the evaluation matrix and writes `records.csv`, `report.json` and
/// `table.txt` under `<out>/matrix/`.
pub fn cmd_matrix(cfg: &RunConfig) -> Result<Vec<String>> {
    let report = matrix_report(cfg)?;
    let dir = cfg.out_dir().join("matrix");
    create_dir(&dir)?;
    report.write_csv(fs::File::create(dir.join("records.csv"))?)?;
    fs::write(dir.join("report.json"), report.to_json()? + "\n")?;
    let table = report.to_table();
    fs::write(dir.join("table.txt"), &table)?;
    Ok(table.lines().map(str::to_string).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityRow {
    pub dataset_a: String,
    pub dataset_b: String,
    pub feature_set: FeatureSet,
    pub distance: Option<f64>,
}

/// Per-feature-set OTDD for every dataset pair, self-pairs included.
pub fn similarity_rows(cfg: &RunConfig) -> Result<Vec<SimilarityRow>> {
    let seed = cfg.seed()?;
    let ids: Vec<&str> = cfg.datasets.iter().map(|d| d.id.as_str()).collect();
    if ids.is_empty() {
        return Err(Error::Config("no datasets defined".into()));
    }
    let data = prepare(cfg, &ids)?;
    let pairs: Vec<(usize, usize)> = (0..ids.len()).flat_map(|i| (i..ids.len()).map(move |j| (i, j))).collect();
    let per_pair: Vec<Vec<SimilarityRow>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let d = otdd_per_set(&data[ids[i]], &data[ids[j]], &cfg.similarity, seed)?;
            Ok(d.into_iter()
                .map(|(set, distance)| SimilarityRow {
                    dataset_a: ids[i].to_string(),
                    dataset_b: ids[j].to_string(),
                    feature_set: set,
                    distance,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_pair.into_iter().flatten().collect())
}

pub fn cmd_similarity(cfg: &RunConfig) -> Result<Vec<String>> {
    let rows = similarity_rows(cfg)?;
    let dir = cfg.out_dir().join("similarity");
    create_dir(&dir)?;
    let mut w = csv::Writer::from_path(dir.join("otdd.csv"))?;
    w.write_record(["dataset_a", "dataset_b", "feature_set", "otdd"])?;
    let mut lines = Vec::new();
    for r in &rows {
        let v = r.distance.map(|d| format!("{d}")).unwrap_or_default();
        w.write_record([r.dataset_a.as_str(), &r.dataset_b, &r.feature_set.to_string(), &v])?;
        lines.push(format!(
            "{} vs {} {}: {}",
            r.dataset_a,
            r.dataset_b,
            r.feature_set,
            r.distance.map_or("-".to_string(), |d| format!("{d:.4}"))
        ));
    }
    w.flush()?;
    Ok(lines)
}

/// Gini importances of a random forest fitted on each dataset's full
/// cleaned feature set, in descending order.
pub fn importance_tables(cfg: &RunConfig) -> Result<Vec<(String, Vec<(String, f64)>)>> {
    let seed = cfg.seed()?;
    let ids: Vec<&str> = cfg.datasets.iter().map(|d| d.id.as_str()).collect();
    if ids.is_empty() {
        return Err(Error::Config("no datasets defined".into()));
    }
    let data = prepare(cfg, &ids)?;
    ids.iter()
        .map(|id| {
            let model = train(
                ClassifierId::C2,
                &data[*id],
                &cfg.hyper,
                crate::seed::sub_seed(seed, &["importance", id]),
            )?;
            let mut imp = model.gini_importance()?;
            imp.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
            Ok((id.to_string(), imp))
        })
        .collect()
}

pub fn cmd_importance(cfg: &RunConfig) -> Result<Vec<String>> {
    let tables = importance_tables(cfg)?;
    let dir = cfg.out_dir().join("importance");
    create_dir(&dir)?;
    let mut lines = Vec::new();
    for (id, imp) in &tables {
        let mut w = csv::Writer::from_path(dir.join(format!("{id}.csv")))?;
        w.write_record(["feature", "importance"])?;
        for (name, v) in imp {
            w.write_record([name.as_str(), &format!("{v}")])?;
        }
        w.flush()?;
        let top: Vec<String> = imp.iter().take(3).map(|(n, v)| format!("{n} {v:.3}")).collect();
        lines.push(format!("{id}: {}", top.join(", ")));
    }
    Ok(lines)
}
