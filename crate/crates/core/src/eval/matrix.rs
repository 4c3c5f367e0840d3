use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cv::{grouped_kfold, stratified_kfold, FoldUnit, Split};
use super::metrics::{Confusion, EvalTuple};
use super::select::{select_best, select_best_combo};
use crate::error::{Error, Result};
use crate::features::{FeatureCombo, FeatureMatrix};
use crate::models::{train, ClassifierId, Hyper};
use crate::seed::sub_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    WithinKFold,
    CrossDataset,
}

/// One train/test cell of the matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainTestConfig {
    pub train: Vec<String>,
    pub test: String,
    pub mode: EvalMode,
}

impl TrainTestConfig {
    pub fn within(dataset: impl Into<String>) -> Self {
        let d = dataset.into();
        Self {
            train: vec![d.clone()],
            test: d,
            mode: EvalMode::WithinKFold,
        }
    }

    pub fn cross(train: &[&str], test: impl Into<String>) -> Self {
        Self {
            train: train.iter().map(|s| s.to_string()).collect(),
            test: test.into(),
            mode: EvalMode::CrossDataset,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.train.is_empty() {
            return Err(Error::Config(format!("{self}: empty training set")));
        }
        match self.mode {
            EvalMode::WithinKFold if self.train != [self.test.clone()] => {
                Err(Error::Config(format!("{self}: within-dataset evaluation must train and test on the same dataset")))
            }
            EvalMode::CrossDataset if self.train.contains(&self.test) => {
                Err(Error::Config(format!("{self}: cross-dataset test set {} is also a training set", self.test)))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for TrainTestConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mode {
            EvalMode::WithinKFold => write!(f, "{} (k-fold)", self.test),
            EvalMode::CrossDataset => write!(f, "{}->{}", self.train.join("+"), self.test),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalOptions {
    pub folds: usize,
    pub fold_unit: FoldUnit,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            folds: 5,
            fold_unit: FoldUnit::Window,
        }
    }
}

/// One classifier's result in a cell. Within-dataset tuples are means of the
/// per-fold values that are defined.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub tuple: EvalTuple,
    pub folds: Vec<(EvalTuple, Confusion)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellResult {
    pub candidates: Vec<Candidate>,
    pub selected: Option<EvalTuple>,
}

fn mean_defined(v: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let (s, n) = v.flatten().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| s / n as f64)
}

pub fn average_folds(classifier: ClassifierId, folds: &[(EvalTuple, Confusion)]) -> EvalTuple {
    EvalTuple {
        auroc: mean_defined(folds.iter().map(|f| f.0.auroc)),
        recall_anxious: mean_defined(folds.iter().map(|f| f.0.recall_anxious)),
        recall_non_anxious: mean_defined(folds.iter().map(|f| f.0.recall_non_anxious)),
        classifier,
    }
}

fn dataset<'a>(datasets: &'a BTreeMap<String, FeatureMatrix>, id: &str) -> Result<&'a FeatureMatrix> {
    datasets
        .get(id)
        .ok_or_else(|| Error::Config(format!("dataset {id:?} is not defined")))
}

fn fit_and_score(
    id: ClassifierId,
    train_m: &FeatureMatrix,
    test_m: &FeatureMatrix,
    hyper: &Hyper,
    seed: u64,
) -> Result<(EvalTuple, Confusion)> {
    let model = train(id, train_m, hyper, seed)?;
    let scores = model.predict_score(test_m)?;
    Ok(EvalTuple::from_scores(id, &scores, &test_m.targets()))
}

/// Evaluates every classifier on one (config, combo) cell and applies the
/// recall-gated selection.
pub fn run_cell(
    config: &TrainTestConfig,
    combo: FeatureCombo,
    classifiers: &[ClassifierId],
    datasets: &BTreeMap<String, FeatureMatrix>,
    hyper: &Hyper,
    opts: &EvalOptions,
    seed: u64,
) -> Result<CellResult> {
    config.validate()?;
    let cell = config.to_string();
    let combo_key = combo.to_string();
    let test = dataset(datasets, &config.test)?.project(combo);
    let candidates = match config.mode {
        EvalMode::WithinKFold => {
            let y = test.targets();
            let fold_seed = sub_seed(seed, &["folds", &config.test]);
            let splits: Vec<Split> = match opts.fold_unit {
                FoldUnit::Window => stratified_kfold(&y, opts.folds, fold_seed)?,
                FoldUnit::Participant => grouped_kfold(&y, &test.groups, opts.folds, fold_seed)?,
            };
            let parts: Vec<(FeatureMatrix, FeatureMatrix)> =
                splits.iter().map(|(tr, te)| (test.select_rows(tr), test.select_rows(te))).collect();
            classifiers
                .iter()
                .map(|&id| {
                    let folds = parts
                        .iter()
                        .enumerate()
                        .map(|(k, (tr, te))| {
                            fit_and_score(id, tr, te, hyper, sub_seed(seed, &[&cell, &combo_key, &id.to_string(), &k.to_string()]))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    Ok(Candidate {
                        tuple: average_folds(id, &folds),
                        folds,
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
        EvalMode::CrossDataset => {
            let parts: Vec<FeatureMatrix> = config
                .train
                .iter()
                .map(|d| dataset(datasets, d).map(|m| m.project(combo)))
                .collect::<Result<_>>()?;
            let train_m = FeatureMatrix::concat(&parts.iter().collect::<Vec<_>>())?;
            train_m.ensure_same_schema(&test)?;
            classifiers
                .iter()
                .map(|&id| {
                    let r = fit_and_score(id, &train_m, &test, hyper, sub_seed(seed, &[&cell, &combo_key, &id.to_string()]))?;
                    Ok(Candidate {
                        tuple: r.0,
                        folds: vec![r],
                    })
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let tuples: Vec<EvalTuple> = candidates.iter().map(|c| c.tuple).collect();
    Ok(CellResult {
        selected: select_best(&tuples),
        candidates,
    })
}

/// One (config, combo, classifier) row of a matrix report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub config: String,
    pub mode: EvalMode,
    pub train: String,
    pub test: String,
    pub combo: FeatureCombo,
    pub classifier: ClassifierId,
    pub auroc: Option<f64>,
    pub recall_anxious: Option<f64>,
    pub recall_non_anxious: Option<f64>,
    /// Chosen by the recall-gated rule within its cell.
    pub selected: bool,
    /// The selected record of the best combination for its config.
    pub best_in_column: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixReport {
    pub configs: Vec<String>,
    pub combos: Vec<FeatureCombo>,
    pub classifiers: Vec<ClassifierId>,
    pub model_count: usize,
    pub records: Vec<Record>,
}

/// Runs every cell on a pool of `workers` threads (0 = all cores). Records
/// are ordered by config, combination and classifier regardless of
/// completion order.
#[allow(clippy::too_many_arguments)]
pub fn run_matrix(
    configs: &[TrainTestConfig],
    combos: &[FeatureCombo],
    classifiers: &[ClassifierId],
    datasets: &BTreeMap<String, FeatureMatrix>,
    hyper: &Hyper,
    opts: &EvalOptions,
    seed: u64,
    workers: usize,
) -> Result<MatrixReport> {
    if configs.is_empty() || combos.is_empty() || classifiers.is_empty() {
        return Err(Error::Config("matrix needs at least one config, combination and classifier".into()));
    }
    for c in configs {
        c.validate()?;
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    let cells: Vec<(usize, usize)> = (0..configs.len()).flat_map(|c| (0..combos.len()).map(move |k| (c, k))).collect();
    let results: Vec<Result<CellResult>> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(c, k)| run_cell(&configs[c], combos[k], classifiers, datasets, hyper, opts, seed))
            .collect()
    });
    let results = results.into_iter().collect::<Result<Vec<_>>>()?;

    let mut records = Vec::with_capacity(results.len() * classifiers.len());
    for (&(c, k), cell) in cells.iter().zip(&results) {
        let cfg = &configs[c];
        for cand in &cell.candidates {
            let t = cand.tuple;
            records.push(Record {
                config: cfg.to_string(),
                mode: cfg.mode,
                train: cfg.train.join("+"),
                test: cfg.test.clone(),
                combo: combos[k],
                classifier: t.classifier,
                auroc: t.auroc,
                recall_anxious: t.recall_anxious,
                recall_non_anxious: t.recall_non_anxious,
                selected: cell.selected.is_some_and(|s| s.classifier == t.classifier),
                best_in_column: false,
            });
        }
    }
    for (c, cfg) in configs.iter().enumerate() {
        let per_combo: Vec<(FeatureCombo, EvalTuple)> = cells
            .iter()
            .zip(&results)
            .filter(|((ci, _), _)| *ci == c)
            .filter_map(|((_, k), cell)| cell.selected.map(|s| (combos[*k], s)))
            .collect();
        if let Some((combo, best)) = select_best_combo(&per_combo) {
            let name = cfg.to_string();
            if let Some(r) = records
                .iter_mut()
                .find(|r| r.config == name && r.combo == combo && r.classifier == best.classifier)
            {
                r.best_in_column = true;
            }
        }
    }
    Ok(MatrixReport {
        configs: configs.iter().map(|c| c.to_string()).collect(),
        combos: combos.to_vec(),
        classifiers: classifiers.to_vec(),
        model_count: records.len(),
        records,
    })
}
