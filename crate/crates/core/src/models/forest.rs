use ndarray::ArrayView2;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tree::{grow, Tree, TreeParams};
use crate::seed::rng_for;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    /// Features tried per node; `None` means round(√p).
    pub max_features: Option<usize>,
    pub tree: TreeParams,
}

impl Default for ForestParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            bootstrap: true,
            max_features: None,
            tree: TreeParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    pub trees: Vec<Tree>,
    /// Mean of per-tree normalised impurity decreases, renormalised.
    pub importance: Vec<f64>,
}

fn normalized(v: &[f64]) -> Vec<f64> {
    let s: f64 = v.iter().sum();
    if s > 0.0 {
        v.iter().map(|x| x / s).collect()
    } else {
        vec![0.0; v.len()]
    }
}

impl RandomForest {
    pub fn fit(x: ArrayView2<f64>, y: &[bool], params: &ForestParams, seed: u64) -> Self {
        let n = x.nrows();
        let p = x.ncols();
        let t: Vec<f64> = y.iter().map(|&b| f64::from(u8::from(b))).collect();
        let k = params
            .max_features
            .unwrap_or_else(|| ((p as f64).sqrt().round() as usize).max(1))
            .clamp(1, p.max(1));
        let grown: Vec<_> = (0..params.n_trees)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, &["forest", &i.to_string()]);
                let samples: Vec<usize> = if params.bootstrap {
                    (0..n).map(|_| rng.random_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                grow(x, &t, &samples, &params.tree, Some(k), Some(&mut rng))
            })
            .collect();
        let mut importance = vec![0.0; p];
        for g in &grown {
            for (acc, v) in importance.iter_mut().zip(normalized(&g.importance)) {
                *acc += v / grown.len() as f64;
            }
        }
        Self {
            importance: normalized(&importance),
            trees: grown.into_iter().map(|g| g.tree).collect(),
        }
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        let m = self.trees.len().max(1) as f64;
        x.outer_iter()
            .map(|r| self.trees.iter().map(|t| t.predict_row(r)).sum::<f64>() / m)
            .collect()
    }
}
