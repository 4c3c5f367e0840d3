//! CART on presorted feature columns.
//!
//! Splits minimise the summed squared deviation of the targets in the two
//! children. For 0/1 targets this equals minimising weighted Gini impurity,
//! because Gini = 2 × variance there. The same grower fits regression trees
//! for gradient boosting.

use ndarray::{ArrayView1, ArrayView2};
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::seed::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TreeParams {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
}

impl Default for TreeParams {
    fn default() -> Self {
        Self {
            max_depth: 8,
            min_samples_leaf: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf { value: f64 },
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub nodes: Vec<Node>,
}

impl Tree {
    pub fn predict_row(&self, row: ArrayView1<f64>) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { value } => return value,
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => i = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        x.outer_iter().map(|r| self.predict_row(r)).collect()
    }

    /// Flat form: per node `[kind, feature, threshold, left, right, value]`.
    pub fn to_flat(&self, out: &mut Vec<f64>) {
        out.push(self.nodes.len() as f64);
        for n in &self.nodes {
            match *n {
                Node::Leaf { value } => out.extend([0.0, 0.0, 0.0, 0.0, 0.0, value]),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => out.extend([1.0, feature as f64, threshold, left as f64, right as f64, 0.0]),
            }
        }
    }

    pub fn from_flat(it: &mut impl Iterator<Item = f64>) -> Option<Self> {
        let n = it.next()? as usize;
        let mut nodes = Vec::with_capacity(n);
        for _ in 0..n {
            let v: Vec<f64> = it.take(6).collect();
            if v.len() != 6 {
                return None;
            }
            nodes.push(if v[0] == 0.0 {
                Node::Leaf { value: v[5] }
            } else {
                let (left, right) = (v[3] as usize, v[4] as usize);
                if left >= n || right >= n {
                    return None;
                }
                Node::Split {
                    feature: v[1] as usize,
                    threshold: v[2],
                    left,
                    right,
                }
            });
        }
        Some(Self { nodes })
    }
}

/// A grown tree plus per-leaf sample lists and per-feature impurity
/// decrease (Gini scale, weighted by node size / root size).
pub struct Grown {
    pub tree: Tree,
    pub leaves: Vec<(usize, Vec<usize>)>,
    pub importance: Vec<f64>,
}

struct Grower<'a> {
    x: ArrayView2<'a, f64>,
    t: &'a [f64],
    params: &'a TreeParams,
    max_features: Option<usize>,
    rng: Option<&'a mut Rng>,
    nodes: Vec<Node>,
    leaves: Vec<(usize, Vec<usize>)>,
    importance: Vec<f64>,
    root_n: f64,
    goes_left: Vec<bool>,
}

struct Best {
    feature: usize,
    threshold: f64,
    gain: f64,
}

impl Grower<'_> {
    fn stats(&self, s: &[usize]) -> (f64, f64) {
        s.iter().fold((0.0, 0.0), |(a, b), &i| (a + self.t[i], b + self.t[i] * self.t[i]))
    }

    fn candidates(&mut self) -> Vec<usize> {
        let p = self.x.ncols();
        match (self.max_features, self.rng.as_deref_mut()) {
            (Some(k), Some(rng)) if k < p => {
                let mut f = sample(rng, p, k).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..p).collect(),
        }
    }

    fn best_split(&mut self, sorted: &[Vec<usize>], sum: f64, sumsq: f64) -> Option<Best> {
        let n = sorted[0].len();
        let min_leaf = self.params.min_samples_leaf.max(1);
        let parent_sse = sumsq - sum * sum / n as f64;
        let mut best: Option<Best> = None;
        for f in self.candidates() {
            let list = &sorted[f];
            let (mut sl, mut ql) = (0.0, 0.0);
            for i in 0..n - 1 {
                let s = list[i];
                sl += self.t[s];
                ql += self.t[s] * self.t[s];
                let nl = i + 1;
                let nr = n - nl;
                if nl < min_leaf || nr < min_leaf {
                    continue;
                }
                let (a, b) = (self.x[[s, f]], self.x[[list[i + 1], f]]);
                if a >= b {
                    continue;
                }
                let (sr, qr) = (sum - sl, sumsq - ql);
                let child = (ql - sl * sl / nl as f64) + (qr - sr * sr / nr as f64);
                let gain = parent_sse - child;
                if best.as_ref().is_none_or(|bst| gain > bst.gain) {
                    let mid = 0.5 * (a + b);
                    best = Some(Best {
                        feature: f,
                        threshold: if mid < b { mid } else { a },
                        gain,
                    });
                }
            }
        }
        best.filter(|b| b.gain > 1e-12 * (1.0 + parent_sse.abs()))
    }

    fn grow(&mut self, sorted: Vec<Vec<usize>>, members: Vec<usize>, depth: usize) -> usize {
        let n = members.len();
        let (sum, sumsq) = self.stats(&members);
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            value: if n > 0 { sum / n as f64 } else { 0.0 },
        });
        let can_split = depth < self.params.max_depth && n >= 2 * self.params.min_samples_leaf.max(1) && !sorted.is_empty();
        let best = if can_split { self.best_split(&sorted, sum, sumsq) } else { None };
        let Some(best) = best else {
            self.leaves.push((id, members));
            return id;
        };
        self.importance[best.feature] += 2.0 * best.gain / self.root_n;
        for &s in &members {
            self.goes_left[s] = self.x[[s, best.feature]] <= best.threshold;
        }
        let (mut ls, mut rs) = (Vec::with_capacity(sorted.len()), Vec::with_capacity(sorted.len()));
        for list in sorted {
            let (l, r): (Vec<usize>, Vec<usize>) = list.into_iter().partition(|&s| self.goes_left[s]);
            ls.push(l);
            rs.push(r);
        }
        let (lm, rm): (Vec<usize>, Vec<usize>) = members.into_iter().partition(|&s| self.goes_left[s]);
        let left = self.grow(ls, lm, depth + 1);
        let right = self.grow(rs, rm, depth + 1);
        self.nodes[id] = Node::Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        };
        id
    }
}

/// Grows a tree on the rows listed in `samples` (repeats allowed). With
/// `max_features` and an RNG, each node considers a random feature subset.
pub fn grow(
    x: ArrayView2<f64>,
    t: &[f64],
    samples: &[usize],
    params: &TreeParams,
    max_features: Option<usize>,
    rng: Option<&mut Rng>,
) -> Grown {
    let p = x.ncols();
    let sorted: Vec<Vec<usize>> = (0..p)
        .map(|f| {
            let mut s = samples.to_vec();
            s.sort_by(|&a, &b| x[[a, f]].total_cmp(&x[[b, f]]));
            s
        })
        .collect();
    let mut g = Grower {
        x,
        t,
        params,
        max_features,
        rng,
        nodes: Vec::new(),
        leaves: Vec::new(),
        importance: vec![0.0; p],
        root_n: samples.len().max(1) as f64,
        goes_left: vec![false; x.nrows()],
    };
    g.grow(sorted, samples.to_vec(), 0);
    Grown {
        tree: Tree { nodes: g.nodes },
        leaves: g.leaves,
        importance: g.importance,
    }
}
