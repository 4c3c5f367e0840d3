use std::cmp::Ordering;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use ndarray::{Array2, ArrayView2, Axis};
use rand::seq::index::sample;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::exact::exact_ot_small;
use super::problem::TransportProblem;
use super::sinkhorn::sinkhorn;
use crate::error::{Error, Result};
use crate::features::{FeatureCombo, FeatureMatrix, FeatureSet, Label, Standardizer};
use crate::seed::rng_for;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OtSolver {
    Sinkhorn,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OtddParams {
    /// Regularisation as a fraction of the mean ground cost.
    pub epsilon: f64,
    pub max_points: usize,
    pub solver: OtSolver,
}

impl Default for OtddParams {
    fn default() -> Self {
        Self {
            epsilon: 0.05,
            max_points: 500,
            solver: OtSolver::Sinkhorn,
        }
    }
}

/// Mean and population covariance of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub mean: DVector<f64>,
    pub cov: DMatrix<f64>,
}

impl Gaussian {
    pub fn fit(x: ArrayView2<f64>) -> Self {
        let (n, p) = x.dim();
        let mean = DVector::from_iterator(p, x.mean_axis(Axis(0)).expect("non-empty class"));
        let mut cov = DMatrix::zeros(p, p);
        for row in x.rows() {
            let d = DVector::from_iterator(p, row.iter().copied()) - &mean;
            cov += &d * d.transpose();
        }
        Self {
            mean,
            cov: cov / n as f64,
        }
    }
}

fn psd_sqrt(m: &DMatrix<f64>) -> DMatrix<f64> {
    let sym = (m + m.transpose()) * 0.5;
    let e = SymmetricEigen::new(sym);
    let d = DMatrix::from_diagonal(&e.eigenvalues.map(|v| v.max(0.0).sqrt()));
    &e.eigenvectors * d * e.eigenvectors.transpose()
}

/// Squared 2-Wasserstein distance between Gaussians:
/// |μ₁ − μ₂|² + tr(Σ₁ + Σ₂ − 2 (Σ₁^½ Σ₂ Σ₁^½)^½).
pub fn bures_wasserstein_sq(a: &Gaussian, b: &Gaussian) -> f64 {
    let mean = (&a.mean - &b.mean).norm_squared();
    let ra = psd_sqrt(&a.cov);
    let cross = psd_sqrt(&(&ra * &b.cov * &ra));
    let bures = a.cov.trace() + b.cov.trace() - 2.0 * cross.trace();
    (mean + bures).max(0.0)
}

fn class_gaussians(x: &Array2<f64>, labels: &[Label]) -> [Option<Gaussian>; 2] {
    [Label::Anxious, Label::NonAnxious].map(|c| {
        let rows: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == c).collect();
        (!rows.is_empty()).then(|| Gaussian::fit(x.select(Axis(0), &rows).view()))
    })
}

fn class_index(l: Label) -> usize {
    usize::from(!l.is_anxious())
}

fn dataset_key(m: &FeatureMatrix) -> String {
    let mut ids: Vec<&str> = m.groups.iter().map(|g| g.dataset.as_str()).collect();
    ids.sort_unstable();
    ids.dedup();
    ids.join("+")
}

/// Total order on matrices used to fix the solve orientation, so that
/// `otdd(a, b)` and `otdd(b, a)` run bit-identical arithmetic.
fn orientation(a: &FeatureMatrix, b: &FeatureMatrix) -> Ordering {
    dataset_key(a)
        .cmp(&dataset_key(b))
        .then(a.n_rows().cmp(&b.n_rows()))
        .then_with(|| {
            a.data
                .iter()
                .zip(b.data.iter())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .then_with(|| a.labels.iter().map(|l| l.is_anxious()).cmp(b.labels.iter().map(|l| l.is_anxious())))
}

/// Seeded subsample keyed by the matrix's own dataset ids and size, so the
/// rows drawn do not depend on which argument position a matrix takes.
fn subsample(m: &FeatureMatrix, max_points: usize, seed: u64) -> FeatureMatrix {
    if m.n_rows() <= max_points {
        return m.clone();
    }
    let key = format!("{}#{}", dataset_key(m), m.n_rows());
    let mut rng = rng_for(seed, &["otdd", &key]);
    let mut rows = sample(&mut rng, m.n_rows(), max_points).into_vec();
    rows.sort_unstable();
    m.select_rows(&rows)
}

/// Label-aware ground cost: squared feature distance plus the squared
/// Bures–Wasserstein distance between the two points' class Gaussians.
pub fn ground_cost(xa: &Array2<f64>, la: &[Label], xb: &Array2<f64>, lb: &[Label]) -> Result<Array2<f64>> {
    let ga = class_gaussians(xa, la);
    let gb = class_gaussians(xb, lb);
    for c in [Label::Anxious, Label::NonAnxious] {
        let k = class_index(c);
        if ga[k].is_some() != gb[k].is_some() {
            return Err(Error::MissingClass(c.to_string()));
        }
    }
    let mut label_cost = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            if let (Some(a), Some(b)) = (&ga[i], &gb[j]) {
                label_cost[i][j] = bures_wasserstein_sq(a, b);
            }
        }
    }
    let (n, m) = (xa.nrows(), xb.nrows());
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let a = xa.row(i);
            (0..m)
                .map(|j| {
                    let d: f64 = a.iter().zip(xb.row(j)).map(|(u, v)| (u - v).powi(2)).sum();
                    d + label_cost[class_index(la[i])][class_index(lb[j])]
                })
                .collect()
        })
        .collect();
    Ok(Array2::from_shape_fn((n, m), |(i, j)| rows[i][j]))
}

/// Optimal transport dataset distance between two labelled feature matrices
/// sharing one schema. Features are z-scored jointly over both subsamples.
pub fn otdd(a: &FeatureMatrix, b: &FeatureMatrix, params: &OtddParams, seed: u64) -> Result<f64> {
    a.ensure_same_schema(b)?;
    if a.n_rows() == 0 || b.n_rows() == 0 {
        return Err(Error::Data("OTDD needs at least one row in each dataset".into()));
    }
    if a.n_cols() == 0 {
        return Err(Error::Data("OTDD needs at least one feature column".into()));
    }
    if a.has_missing() || b.has_missing() {
        return Err(Error::Data("OTDD inputs contain missing values".into()));
    }
    if params.max_points == 0 {
        return Err(Error::InvalidParameter("max_points must be positive".into()));
    }
    let (a, b) = if orientation(a, b).is_gt() { (b, a) } else { (a, b) };
    let a = subsample(a, params.max_points, seed);
    let b = subsample(b, params.max_points, seed);
    let joint = ndarray::concatenate(Axis(0), &[a.data.view(), b.data.view()]).expect("same width");
    let scaler = Standardizer::fit(&joint);
    let xa = scaler.transform(&a.data);
    let xb = scaler.transform(&b.data);
    let cost = ground_cost(&xa, &a.labels, &xb, &b.labels)?;
    let result = match params.solver {
        OtSolver::Exact => exact_ot_small(&TransportProblem::uniform(cost, 0.0)?)?,
        // Entropic smoothing biases ⟨plan, cost⟩ away from zero even for
        // identical inputs; the distance of a dataset to itself is zero.
        OtSolver::Sinkhorn if a.data == b.data && a.labels == b.labels => return Ok(0.0),
        OtSolver::Sinkhorn => {
            let mean_cost = cost.mean().unwrap_or(0.0);
            if mean_cost == 0.0 {
                return Ok(0.0);
            }
            sinkhorn(&TransportProblem::uniform(cost, params.epsilon * mean_cost)?)?
        }
    };
    Ok(result.distance)
}

/// OTDD restricted to each feature set; `None` where the set has no
/// columns left in the shared schema.
pub fn otdd_per_set(
    a: &FeatureMatrix,
    b: &FeatureMatrix,
    params: &OtddParams,
    seed: u64,
) -> Result<Vec<(FeatureSet, Option<f64>)>> {
    FeatureSet::ALL
        .iter()
        .map(|&set| {
            let combo = FeatureCombo::single(set);
            let (pa, pb) = (a.project(combo), b.project(combo));
            if pa.n_cols() == 0 {
                Ok((set, None))
            } else {
                otdd(&pa, &pb, params, seed).map(|d| (set, Some(d)))
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{Column, GroupKey};
    use ndarray::array;

    fn matrix(id: &str, data: Array2<f64>, labels: Vec<Label>) -> FeatureMatrix {
        let cols = (0..data.ncols())
            .map(|k| Column::new(FeatureSet::F1, format!("x{k}")))
            .collect();
        let groups = (0..data.nrows()).map(|i| GroupKey::new(id, format!("p{i}"), "a")).collect();
        FeatureMatrix::new(cols, data, labels, groups).unwrap()
    }

    #[test]
    fn single_points_give_squared_distance() {
        // No joint scaling can hide the geometry here, so compare raw costs.
        let xa = array![[0.0, 0.0]];
        let xb = array![[3.0, 4.0]];
        let c = ground_cost(&xa, &[Label::Anxious], &xb, &[Label::Anxious]).unwrap();
        // The class Gaussians are the points themselves: label term is 25 too.
        assert!((c[[0, 0]] - 50.0).abs() < 1e-12);
    }

    #[test]
    fn bures_matches_one_dimensional_closed_form() {
        // W2²(N(m1, s1²), N(m2, s2²)) = (m1 − m2)² + (s1 − s2)².
        let a = Gaussian {
            mean: DVector::from_vec(vec![1.0]),
            cov: DMatrix::from_vec(1, 1, vec![4.0]),
        };
        let b = Gaussian {
            mean: DVector::from_vec(vec![-0.5]),
            cov: DMatrix::from_vec(1, 1, vec![0.25]),
        };
        assert!((bures_wasserstein_sq(&a, &b) - (2.25 + 2.25)).abs() < 1e-12);
    }

    #[test]
    fn bures_matches_commuting_closed_form() {
        // Diagonal covariances commute: trace term is Σ(√a − √b)².
        let a = Gaussian {
            mean: DVector::zeros(2),
            cov: DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 9.0])),
        };
        let b = Gaussian {
            mean: DVector::zeros(2),
            cov: DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1.0])),
        };
        assert!((bures_wasserstein_sq(&a, &b) - 5.0).abs() < 1e-10);
    }

    #[test]
    fn missing_class_is_named() {
        let a = matrix("A", array![[0.0], [1.0]], vec![Label::Anxious, Label::NonAnxious]);
        let b = matrix("B", array![[0.0], [1.0]], vec![Label::Anxious, Label::Anxious]);
        let e = otdd(&a, &b, &OtddParams::default(), 1).unwrap_err();
        assert!(e.to_string().contains("non-anxious") || e.to_string().contains("NonAnxious"), "{e}");
    }

    #[test]
    fn subsample_is_role_independent() {
        let n = 40;
        let a = matrix(
            "A",
            Array2::from_shape_fn((n, 1), |(i, _)| i as f64),
            (0..n).map(|i| Label::from_bool(i % 2 == 0)).collect(),
        );
        let s1 = subsample(&a, 10, 5);
        let s2 = subsample(&a, 10, 5);
        assert_eq!(s1, s2);
        assert_eq!(s1.n_rows(), 10);
    }

    #[test]
    fn argument_order_does_not_change_the_distance() {
        let labels: Vec<Label> = (0..30).map(|i| Label::from_bool(i % 3 == 0)).collect();
        for (ida, idb) in [("A", "B"), ("S", "S")] {
            let a = matrix(ida, Array2::from_shape_fn((30, 3), |(i, j)| ((i * 7 + j * 3) % 11) as f64), labels.clone());
            let b = matrix(idb, Array2::from_shape_fn((30, 3), |(i, j)| ((i * 5 + j) % 13) as f64 * 0.7), labels.clone());
            let params = OtddParams {
                max_points: 20,
                ..OtddParams::default()
            };
            let ab = otdd(&a, &b, &params, 3).unwrap();
            let ba = otdd(&b, &a, &params, 3).unwrap();
            assert!(ab > 0.0);
            assert_eq!(ab.to_bits(), ba.to_bits());
        }
    }
}
