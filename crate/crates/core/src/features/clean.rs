use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use super::matrix::FeatureMatrix;
use super::schema::Column;

pub const CORRELATION_THRESHOLD: f64 = 0.75;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MissingPolicy {
    /// Drop any column with a missing value among usable rows, then drop
    /// unusable rows.
    #[default]
    ColumnsFirst,
    /// Drop every row holding a missing value; keep all columns.
    RowsFirst,
}

/// A row is unusable when every cardiac value, or every EDA value, is
/// missing (failed peak detection or a dead channel).
pub fn unusable_rows(m: &FeatureMatrix) -> Vec<bool> {
    let cardiac: Vec<usize> = (0..m.n_cols()).filter(|&c| m.columns[c].set.is_cardiac()).collect();
    let eda: Vec<usize> = (0..m.n_cols()).filter(|&c| !m.columns[c].set.is_cardiac()).collect();
    let all_missing = |row: ArrayView1<f64>, cols: &[usize]| !cols.is_empty() && cols.iter().all(|&c| row[c].is_nan());
    m.data
        .outer_iter()
        .map(|row| all_missing(row, &cardiac) || all_missing(row, &eda))
        .collect()
}

pub fn drop_missing(m: &FeatureMatrix, policy: MissingPolicy) -> FeatureMatrix {
    match policy {
        MissingPolicy::ColumnsFirst => {
            let unusable = unusable_rows(m);
            let rows: Vec<usize> = (0..m.n_rows()).filter(|&r| !unusable[r]).collect();
            let cols: Vec<usize> = (0..m.n_cols())
                .filter(|&c| rows.iter().all(|&r| !m.data[[r, c]].is_nan()))
                .collect();
            m.select_columns(&cols).select_rows(&rows)
        }
        MissingPolicy::RowsFirst => {
            let rows: Vec<usize> = (0..m.n_rows())
                .filter(|&r| m.data.row(r).iter().all(|v| !v.is_nan()))
                .collect();
            m.select_rows(&rows)
        }
    }
}

fn pearson(a: ArrayView1<f64>, b: ArrayView1<f64>) -> f64 {
    let n = a.len() as f64;
    let (ma, mb) = (a.sum() / n, b.sum() / n);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    sab / (saa * sbb).sqrt()
}

fn is_constant(col: ArrayView1<f64>) -> bool {
    col.iter().all(|v| *v == col[0])
}

/// Columns surviving the correlation filter: constant columns go first,
/// then each column is kept unless |r| with an earlier kept column exceeds
/// `threshold`.
pub fn correlation_keep(data: &Array2<f64>, threshold: f64) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for c in 0..data.ncols() {
        let col = data.column(c);
        if col.is_empty() || is_constant(col) {
            continue;
        }
        if kept.iter().all(|&k| pearson(data.column(k), col).abs() <= threshold) {
            kept.push(c);
        }
    }
    kept
}

pub fn correlation_prune(m: &FeatureMatrix, threshold: f64) -> FeatureMatrix {
    m.select_columns(&correlation_keep(&m.data, threshold))
}

/// Columns that survive pruning in every part separately, in the order of
/// the first part.
pub fn correlation_keep_per_part(parts: &[&FeatureMatrix], threshold: f64) -> Vec<Column> {
    let survivors: Vec<Vec<Column>> = parts
        .iter()
        .map(|p| correlation_prune(p, threshold).columns)
        .collect();
    match survivors.split_first() {
        Some((first, rest)) => first
            .iter()
            .filter(|c| rest.iter().all(|s| s.contains(c)))
            .cloned()
            .collect(),
        None => Vec::new(),
    }
}

/// Column means and population SDs fitted on a training split.
#[derive(Debug, Clone, PartialEq)]
pub struct Standardizer {
    pub mean: Array1<f64>,
    pub sd: Array1<f64>,
}

impl Standardizer {
    pub fn fit(x: &Array2<f64>) -> Self {
        let n = x.nrows().max(1) as f64;
        let mean = x.sum_axis(Axis(0)) / n;
        let sd = x.map_axis(Axis(0), |c| {
            let m = c.sum() / n;
            (c.iter().map(|v| (v - m).powi(2)).sum::<f64>() / n).sqrt()
        });
        Self { mean, sd }
    }

    /// Zero-SD columns pass through untouched.
    pub fn transform(&self, x: &Array2<f64>) -> Array2<f64> {
        let mut out = x.clone();
        for (c, mut col) in out.columns_mut().into_iter().enumerate() {
            if self.sd[c] > 0.0 {
                col.mapv_inplace(|v| (v - self.mean[c]) / self.sd[c]);
            }
        }
        out
    }
}

pub fn standardize(train: &FeatureMatrix, apply_to: &FeatureMatrix) -> FeatureMatrix {
    let s = Standardizer::fit(&train.data);
    FeatureMatrix {
        data: s.transform(&apply_to.data),
        ..apply_to.clone()
    }
}
