//! Run configuration, read from TOML.
//!
//! ```toml
//! seed = 42
//! out = "out"
//! workers = 0
//!
//! [pipeline]             # filter band, EDA cutoff, window length and shift
//! [clean]                # missing-value policy, correlation threshold, prune mode
//! [eval]                 # folds, fold_unit
//! [hyper]                # per-classifier hyperparameters
//! [similarity]           # epsilon, max_points, solver
//!
//! [[datasets]]
//! id = "A1"
//! raw_dir = "data/A1"    # or: features = "A1.csv", or a [datasets.synthetic] table
//!
//! [matrix]
//! classifiers = ["C1", "C2", "C3", "C4", "C5"]
//! combos = "all"         # or a list such as ["F1", "F1+F5"]
//! [[matrix.configs]]
//! train = ["A1"]
//! test = "A1"
//! mode = "within_k_fold" # or "cross_dataset"
//! ```
//!
//! Relative paths resolve against the config file's directory.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::{EvalOptions, TrainTestConfig};
use crate::features::{enumerate_combos, FeatureCombo, MissingPolicy, PipelineConfig, CORRELATION_THRESHOLD};
use crate::models::{ClassifierId, Hyper};
use crate::signal::CohortSpec;
use crate::similarity::OtddParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneMode {
    /// One correlation filter over all rows of all datasets.
    #[default]
    Global,
    /// Keep the columns that survive the filter within every activity.
    PerActivity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CleanConfig {
    pub missing: MissingPolicy,
    pub correlation_threshold: f64,
    pub prune: PruneMode,
}

impl Default for CleanConfig {
    fn default() -> Self {
        Self {
            missing: MissingPolicy::default(),
            correlation_threshold: CORRELATION_THRESHOLD,
            prune: PruneMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub id: String,
    /// Directory of signal CSVs plus `paq.csv`.
    #[serde(default)]
    pub raw_dir: Option<PathBuf>,
    /// Precomputed feature-matrix CSV.
    #[serde(default)]
    pub features: Option<PathBuf>,
    /// Generated in memory from the run seed.
    #[serde(default)]
    pub synthetic: Option<CohortSpec>,
}

/// Either every combination or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComboSelection {
    Named(String),
    List(Vec<FeatureCombo>),
}

impl Default for ComboSelection {
    fn default() -> Self {
        Self::Named("all".into())
    }
}

impl ComboSelection {
    pub fn resolve(&self) -> Result<Vec<FeatureCombo>> {
        match self {
            Self::Named(s) if s.eq_ignore_ascii_case("all") => Ok(enumerate_combos()),
            Self::Named(s) => Ok(vec![s.parse()?]),
            Self::List(v) => Ok(v.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MatrixConfig {
    pub classifiers: Vec<ClassifierId>,
    pub combos: ComboSelection,
    pub configs: Vec<TrainTestConfig>,
}

impl Default for MatrixConfig {
    fn default() -> Self {
        Self {
            classifiers: ClassifierId::CLASSICAL.to_vec(),
            combos: ComboSelection::default(),
            configs: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    pub pipeline: PipelineConfig,
    pub clean: CleanConfig,
    pub eval: EvalOptions,
    pub hyper: Hyper,
    pub similarity: OtddParams,
    pub datasets: Vec<DatasetConfig>,
    pub matrix: MatrixConfig,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn from_toml(text: &str, base_dir: impl Into<PathBuf>) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.base_dir = base_dir.into();
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::from_toml(&text, base).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.seed.is_some() {
            self.seed = o.seed;
        }
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if o.workers.is_some() {
            self.workers = o.workers;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let mut ids = BTreeSet::new();
        for d in &self.datasets {
            if d.id.is_empty() {
                return Err(Error::Config("dataset with an empty id".into()));
            }
            if !ids.insert(d.id.as_str()) {
                return Err(Error::Config(format!("dataset {:?} defined twice", d.id)));
            }
            let sources = usize::from(d.raw_dir.is_some()) + usize::from(d.features.is_some()) + usize::from(d.synthetic.is_some());
            if sources != 1 {
                return Err(Error::Config(format!(
                    "dataset {:?} needs exactly one of raw_dir, features or synthetic",
                    d.id
                )));
            }
        }
        for c in &self.matrix.configs {
            c.validate()?;
            for id in c.train.iter().chain(std::iter::once(&c.test)) {
                if !ids.contains(id.as_str()) {
                    return Err(Error::Config(format!("{c}: dataset {id:?} is not defined")));
                }
            }
        }
        if !(0.0..=1.0).contains(&self.clean.correlation_threshold) {
            return Err(Error::Config("correlation_threshold must lie in [0, 1]".into()));
        }
        if self.eval.folds < 2 {
            return Err(Error::Config("eval.folds must be at least 2".into()));
        }
        self.matrix.combos.resolve()?;
        Ok(())
    }

    pub fn seed(&self) -> Result<u64> {
        self.seed
            .ok_or_else(|| Error::Config("a seed is required (config `seed` or --seed)".into()))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(0)
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn dataset(&self, id: &str) -> Result<&DatasetConfig> {
        self.datasets
            .iter()
            .find(|d| d.id == id)
            .ok_or_else(|| Error::Config(format!("dataset {id:?} is not defined")))
    }
}
