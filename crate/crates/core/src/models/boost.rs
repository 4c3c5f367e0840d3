use ndarray::ArrayView2;
use serde::{Deserialize, Serialize};

use super::tree::{grow, Node, Tree, TreeParams};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoostParams {
    pub n_trees: usize,
    pub learning_rate: f64,
    pub tree: TreeParams,
}

impl Default for BoostParams {
    fn default() -> Self {
        Self {
            n_trees: 100,
            learning_rate: 0.1,
            tree: TreeParams {
                max_depth: 3,
                min_samples_leaf: 1,
            },
        }
    }
}

/// Gradient-boosted trees on the logistic loss. Each tree fits the
/// residual `y − p`; leaves take one Newton step, `Σr / Σp(1−p)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientBoosting {
    pub init: f64,
    pub learning_rate: f64,
    pub trees: Vec<Tree>,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl GradientBoosting {
    pub fn fit(x: ArrayView2<f64>, y: &[bool], params: &BoostParams) -> Self {
        let n = x.nrows();
        let t: Vec<f64> = y.iter().map(|&b| f64::from(u8::from(b))).collect();
        let prior = (t.iter().sum::<f64>() / n as f64).clamp(1e-12, 1.0 - 1e-12);
        let init = (prior / (1.0 - prior)).ln();
        let mut f = vec![init; n];
        let all: Vec<usize> = (0..n).collect();
        let mut trees = Vec::with_capacity(params.n_trees);
        for _ in 0..params.n_trees {
            let p: Vec<f64> = f.iter().map(|&z| sigmoid(z)).collect();
            let r: Vec<f64> = t.iter().zip(&p).map(|(t, p)| t - p).collect();
            let mut g = grow(x, &r, &all, &params.tree, None, None);
            for (node, members) in &g.leaves {
                let num: f64 = members.iter().map(|&i| r[i]).sum();
                let den: f64 = members.iter().map(|&i| p[i] * (1.0 - p[i])).sum();
                let value = if den.abs() < 1e-12 { 0.0 } else { num / den };
                g.tree.nodes[*node] = Node::Leaf { value };
                for &i in members {
                    f[i] += params.learning_rate * value;
                }
            }
            trees.push(g.tree);
        }
        Self {
            init,
            learning_rate: params.learning_rate,
            trees,
        }
    }

    pub fn decision(&self, x: ArrayView2<f64>) -> Vec<f64> {
        x.outer_iter()
            .map(|r| self.init + self.learning_rate * self.trees.iter().map(|t| t.predict_row(r)).sum::<f64>())
            .collect()
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        self.decision(x).into_iter().map(sigmoid).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn first_tree_is_newton_step() {
        let x = array![[0.0], [0.0], [1.0], [1.0]];
        let y = [false, false, true, true];
        let params = BoostParams {
            n_trees: 1,
            ..BoostParams::default()
        };
        let m = GradientBoosting::fit(x.view(), &y, &params);
        assert_eq!(m.init, 0.0);
        // residual ±0.5, hessian 0.25 each → leaf ±2, scaled by 0.1
        let d = m.decision(x.view());
        assert!((d[0] + 0.2).abs() < 1e-12 && (d[3] - 0.2).abs() < 1e-12);
    }
}
