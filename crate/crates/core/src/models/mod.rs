//! Classifiers C1–C5 and the DNN behind one seeded `train` entry point.
//!
//! | id  | model |
//! |-----|-------|
//! | C1  | L2 logistic regression, full-batch gradient descent |
//! | C2  | random forest, bootstrap + √p features per node |
//! | C3  | CART, Gini, depth 8, min leaf 5 |
//! | C4  | linear soft-margin SVM, subgradient descent |
//! | C5  | gradient-boosted depth-3 trees, logistic loss |
//! | DNN | 256-128-64-32-16 ReLU network, sigmoid output, Adam |
//!
//! C1, C4 and the DNN z-score their inputs with statistics of the training
//! rows; the fitted scaler travels with the model.

mod boost;
mod finetune;
mod forest;
mod logistic;
mod mlp;
mod persist;
mod svm;
mod tree;

use std::fmt;
use std::str::FromStr;

use ndarray::{Array2, ArrayView2};
use serde::{Deserialize, Serialize};

pub use boost::{BoostParams, GradientBoosting};
pub use finetune::{finetune_mlp, split_70_15_15, FinetuneReport};
pub use forest::{ForestParams, RandomForest};
pub use logistic::{LogisticParams, LogisticRegression};
pub use mlp::{Gradients, Mlp, MlpSpec};
pub use svm::{LinearSvm, SvmParams};
pub use tree::{grow, Grown, Node, Tree, TreeParams};

use crate::error::{Error, Result};
use crate::features::{FeatureMatrix, Standardizer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassifierId {
    C1,
    C2,
    C3,
    C4,
    C5,
    Dnn,
}

impl ClassifierId {
    pub const ALL: [ClassifierId; 6] = [Self::C1, Self::C2, Self::C3, Self::C4, Self::C5, Self::Dnn];
    pub const CLASSICAL: [ClassifierId; 5] = [Self::C1, Self::C2, Self::C3, Self::C4, Self::C5];

    pub fn index(self) -> usize {
        self as usize
    }

    fn scaled(self) -> bool {
        matches!(self, Self::C1 | Self::C4 | Self::Dnn)
    }

    /// Hard-label cut on the score scale.
    pub fn threshold(self) -> f64 {
        if self == Self::C4 {
            0.0
        } else {
            0.5
        }
    }
}

impl fmt::Display for ClassifierId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Dnn => f.pad("DNN"),
            other => f.pad(&format!("C{}", other.index() + 1)),
        }
    }
}

impl FromStr for ClassifierId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.to_string().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Config(format!("unknown classifier {s:?}")))
    }
}

impl Serialize for ClassifierId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ClassifierId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyper {
    pub logistic: LogisticParams,
    pub forest: ForestParams,
    pub tree: TreeParams,
    pub svm: SvmParams,
    pub boost: BoostParams,
    pub mlp: MlpSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Logistic(LogisticRegression),
    Forest(RandomForest),
    Tree(Tree),
    Svm(LinearSvm),
    Boost(GradientBoosting),
    Mlp(Mlp),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainedModel {
    pub id: ClassifierId,
    pub feature_names: Vec<String>,
    pub seed: u64,
    pub scaler: Option<Standardizer>,
    pub params: Params,
}

fn check_training_data(x: ArrayView2<f64>, y: &[bool]) -> Result<()> {
    if x.nrows() != y.len() {
        return Err(Error::Invariant(format!("{} rows but {} labels", x.nrows(), y.len())));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::Data("training matrix contains missing or non-finite values".into()));
    }
    let pos = y.iter().filter(|b| **b).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::DegenerateLabels(format!(
            "{} rows, all {}",
            y.len(),
            if pos == 0 { "NonAnxious" } else { "Anxious" }
        )));
    }
    Ok(())
}

/// Fits classifier `id` on raw arrays.
pub fn train_arrays(
    id: ClassifierId,
    x: ArrayView2<f64>,
    y: &[bool],
    feature_names: Vec<String>,
    hyper: &Hyper,
    seed: u64,
) -> Result<TrainedModel> {
    check_training_data(x, y)?;
    let scaler = id.scaled().then(|| Standardizer::fit(&x.to_owned()));
    let scaled: Option<Array2<f64>> = scaler.as_ref().map(|s| s.transform(&x.to_owned()));
    let xs = scaled.as_ref().map_or(x, |a| a.view());
    let params = match id {
        ClassifierId::C1 => Params::Logistic(LogisticRegression::fit(xs, y, &hyper.logistic)),
        ClassifierId::C2 => Params::Forest(RandomForest::fit(xs, y, &hyper.forest, seed)),
        ClassifierId::C3 => {
            let t: Vec<f64> = y.iter().map(|&b| f64::from(u8::from(b))).collect();
            let all: Vec<usize> = (0..xs.nrows()).collect();
            Params::Tree(grow(xs, &t, &all, &hyper.tree, None, None).tree)
        }
        ClassifierId::C4 => Params::Svm(LinearSvm::fit(xs, y, &hyper.svm)),
        ClassifierId::C5 => Params::Boost(GradientBoosting::fit(xs, y, &hyper.boost)),
        ClassifierId::Dnn => Params::Mlp(Mlp::fit(xs, y, &hyper.mlp, seed)),
    };
    Ok(TrainedModel {
        id,
        feature_names,
        seed,
        scaler,
        params,
    })
}

pub fn train(id: ClassifierId, m: &FeatureMatrix, hyper: &Hyper, seed: u64) -> Result<TrainedModel> {
    train_arrays(id, m.data.view(), &m.targets(), m.feature_names(), hyper, seed)
}

impl TrainedModel {
    /// Scores on raw (unscaled) rows; higher means more Anxious. C4 returns
    /// the signed margin, the others a probability.
    pub fn score_arrays(&self, x: ArrayView2<f64>) -> Vec<f64> {
        if x.nrows() == 0 {
            return Vec::new();
        }
        let scaled = self.scaler.as_ref().map(|s| s.transform(&x.to_owned()));
        let xs = scaled.as_ref().map_or(x, |a| a.view());
        match &self.params {
            Params::Logistic(m) => m.predict(xs),
            Params::Forest(m) => m.predict(xs),
            Params::Tree(m) => m.predict(xs),
            Params::Svm(m) => m.decision(xs),
            Params::Boost(m) => m.predict(xs),
            Params::Mlp(m) => m.predict(xs),
        }
    }

    pub fn check_schema(&self, names: &[String]) -> Result<()> {
        if names == self.feature_names.as_slice() {
            Ok(())
        } else {
            Err(Error::schema(&self.feature_names, names))
        }
    }

    pub fn predict_score(&self, m: &FeatureMatrix) -> Result<Vec<f64>> {
        self.check_schema(&m.feature_names())?;
        Ok(self.score_arrays(m.data.view()))
    }

    pub fn predict_labels(&self, m: &FeatureMatrix) -> Result<Vec<bool>> {
        let t = self.id.threshold();
        Ok(self.predict_score(m)?.into_iter().map(|s| s >= t).collect())
    }

    /// Normalised mean impurity decrease per feature (random forest only).
    pub fn gini_importance(&self) -> Result<Vec<(String, f64)>> {
        match &self.params {
            Params::Forest(f) => Ok(self.feature_names.iter().cloned().zip(f.importance.iter().copied()).collect()),
            _ => Err(Error::InvalidParameter(format!("{} has no Gini importance", self.id))),
        }
    }
}
