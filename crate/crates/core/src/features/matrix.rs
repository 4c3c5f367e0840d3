use std::io::{Read, Write};
use std::path::Path;

use ndarray::{Array2, Axis};
use serde::{Deserialize, Serialize};

use super::labels::Label;
use super::schema::{Column, FeatureCombo};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupKey {
    pub dataset: String,
    pub participant: String,
    pub activity: String,
}

impl GroupKey {
    pub fn new(dataset: impl Into<String>, participant: impl Into<String>, activity: impl Into<String>) -> Self {
        Self {
            dataset: dataset.into(),
            participant: participant.into(),
            activity: activity.into(),
        }
    }
}

/// Windows × features. Missing values are NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    pub columns: Vec<Column>,
    pub data: Array2<f64>,
    pub labels: Vec<Label>,
    pub groups: Vec<GroupKey>,
}

const META_COLUMNS: [&str; 4] = ["label", "dataset", "participant", "activity"];

impl FeatureMatrix {
    pub fn new(columns: Vec<Column>, data: Array2<f64>, labels: Vec<Label>, groups: Vec<GroupKey>) -> Result<Self> {
        if data.ncols() != columns.len() {
            return Err(Error::Invariant(format!(
                "{} columns named but data has {}",
                columns.len(),
                data.ncols()
            )));
        }
        if labels.len() != data.nrows() || groups.len() != data.nrows() {
            return Err(Error::Invariant(format!(
                "{} rows but {} labels and {} group keys",
                data.nrows(),
                labels.len(),
                groups.len()
            )));
        }
        Ok(Self {
            columns,
            data,
            labels,
            groups,
        })
    }

    pub fn empty(columns: Vec<Column>) -> Self {
        let n = columns.len();
        Self {
            columns,
            data: Array2::zeros((0, n)),
            labels: Vec::new(),
            groups: Vec::new(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn feature_names(&self) -> Vec<String> {
        self.columns.iter().map(Column::header).collect()
    }

    /// `true` for Anxious.
    pub fn targets(&self) -> Vec<bool> {
        self.labels.iter().map(|l| l.is_anxious()).collect()
    }

    /// (anxious, non-anxious) row counts.
    pub fn class_counts(&self) -> (usize, usize) {
        let a = self.labels.iter().filter(|l| l.is_anxious()).count();
        (a, self.labels.len() - a)
    }

    pub fn has_missing(&self) -> bool {
        self.data.iter().any(|v| v.is_nan())
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            columns: self.columns.clone(),
            data: self.data.select(Axis(0), rows),
            labels: rows.iter().map(|&r| self.labels[r]).collect(),
            groups: rows.iter().map(|&r| self.groups[r].clone()).collect(),
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            columns: cols.iter().map(|&c| self.columns[c].clone()).collect(),
            data: self.data.select(Axis(1), cols),
            labels: self.labels.clone(),
            groups: self.groups.clone(),
        }
    }

    /// Keeps the columns whose name appears in `names`, in this matrix's order.
    pub fn retain_named(&self, names: &[Column]) -> Self {
        let cols: Vec<usize> = (0..self.n_cols()).filter(|&c| names.contains(&self.columns[c])).collect();
        self.select_columns(&cols)
    }

    /// Columns belonging to the combination's feature sets.
    pub fn project(&self, combo: FeatureCombo) -> Self {
        let cols: Vec<usize> = (0..self.n_cols()).filter(|&c| combo.contains(self.columns[c].set)).collect();
        self.select_columns(&cols)
    }

    pub fn filter_rows(&self, keep: impl Fn(&GroupKey, Label) -> bool) -> Self {
        let rows: Vec<usize> = (0..self.n_rows()).filter(|&r| keep(&self.groups[r], self.labels[r])).collect();
        self.select_rows(&rows)
    }

    /// Row-wise concatenation; every part must share the first part's schema.
    pub fn concat(parts: &[&FeatureMatrix]) -> Result<Self> {
        let Some(first) = parts.first() else {
            return Err(Error::Invariant("nothing to concatenate".into()));
        };
        for p in parts {
            if p.columns != first.columns {
                return Err(Error::schema(&first.feature_names(), &p.feature_names()));
            }
        }
        let views: Vec<_> = parts.iter().map(|p| p.data.view()).collect();
        let data = ndarray::concatenate(Axis(0), &views).map_err(|e| Error::Invariant(e.to_string()))?;
        Ok(Self {
            columns: first.columns.clone(),
            data,
            labels: parts.iter().flat_map(|p| p.labels.iter().copied()).collect(),
            groups: parts.iter().flat_map(|p| p.groups.iter().cloned()).collect(),
        })
    }

    pub fn ensure_same_schema(&self, other: &FeatureMatrix) -> Result<()> {
        if self.columns == other.columns {
            Ok(())
        } else {
            Err(Error::schema(&self.feature_names(), &other.feature_names()))
        }
    }

    /// Writes the CSV form: feature columns, then label/dataset/participant/
    /// activity. Values carry 17 significant digits; missing is empty.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = self.feature_names();
        header.extend(META_COLUMNS.iter().map(|s| s.to_string()));
        w.write_record(&header)?;
        for (r, row) in self.data.outer_iter().enumerate() {
            let mut rec: Vec<String> = row
                .iter()
                .map(|v| if v.is_nan() { String::new() } else { format!("{v:.16e}") })
                .collect();
            let g = &self.groups[r];
            rec.extend([self.labels[r].to_string(), g.dataset.clone(), g.participant.clone(), g.activity.clone()]);
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let f = std::fs::File::create(path.as_ref())?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn read_csv<R: Read>(input: R, origin: &Path) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let header = r.headers()?.clone();
        let n = header.len();
        if n < META_COLUMNS.len() || header.iter().skip(n - 4).ne(META_COLUMNS) {
            return Err(Error::parse(origin, 1, "header must end with label,dataset,participant,activity"));
        }
        let columns = header
            .iter()
            .take(n - 4)
            .map(|h| Column::parse_header(h).ok_or_else(|| Error::parse(origin, 1, format!("bad feature column {h:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let k = columns.len();
        let mut values = Vec::new();
        let mut labels = Vec::new();
        let mut groups = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let rec = rec?;
            let line = i + 2;
            for field in rec.iter().take(k) {
                let v = if field.is_empty() {
                    f64::NAN
                } else {
                    field
                        .parse::<f64>()
                        .map_err(|_| Error::parse(origin, line, format!("non-numeric value {field:?}")))?
                };
                values.push(v);
            }
            labels.push(rec[k].parse().map_err(|e: Error| Error::parse(origin, line, e.to_string()))?);
            groups.push(GroupKey::new(&rec[k + 1], &rec[k + 2], &rec[k + 3]));
        }
        let data = Array2::from_shape_vec((labels.len(), k), values).map_err(|e| Error::Invariant(e.to_string()))?;
        Self::new(columns, data, labels, groups)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path)?;
        Self::read_csv(std::io::BufReader::new(f), path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::{full_schema, FeatureSet};
    use proptest::prelude::*;

    fn matrix(rows: usize) -> FeatureMatrix {
        let cols = full_schema();
        let data = Array2::from_shape_fn((rows, cols.len()), |(r, c)| (r * 100 + c) as f64 * 0.1);
        let labels = (0..rows).map(|r| Label::from_bool(r % 2 == 0)).collect();
        let groups = (0..rows).map(|r| GroupKey::new("D", format!("p{r}"), "speech")).collect();
        FeatureMatrix::new(cols, data, labels, groups).unwrap()
    }

    #[test]
    fn projection_sizes() {
        let m = matrix(3);
        assert_eq!(m.project(FeatureCombo::ALL), m);
        assert_eq!(m.project(FeatureCombo::single(FeatureSet::F2)).n_cols(), 4);
        let f15 = FeatureCombo::new(&[FeatureSet::F1, FeatureSet::F5]).unwrap();
        assert_eq!(m.project(f15).n_cols(), 21);
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_bit_exact(vals in prop::collection::vec(prop_oneof![any::<f64>().prop_filter("finite", |v| v.is_finite()), Just(f64::NAN)], 52 * 2)) {
            let mut m = matrix(2);
            m.data = Array2::from_shape_vec((2, 52), vals).unwrap();
            let mut buf = Vec::new();
            m.write_csv(&mut buf).unwrap();
            let back = FeatureMatrix::read_csv(buf.as_slice(), Path::new("mem")).unwrap();
            prop_assert_eq!(&back.columns, &m.columns);
            prop_assert_eq!(&back.labels, &m.labels);
            prop_assert_eq!(&back.groups, &m.groups);
            for (a, b) in back.data.iter().zip(m.data.iter()) {
                prop_assert!(a.to_bits() == b.to_bits() || (a.is_nan() && b.is_nan()));
            }
        }
    }

    #[test]
    fn concat_rejects_schema_mismatch() {
        let a = matrix(2);
        let b = a.project(FeatureCombo::single(FeatureSet::F1));
        assert!(matches!(FeatureMatrix::concat(&[&a, &b]), Err(Error::SchemaMismatch { .. })));
        assert_eq!(FeatureMatrix::concat(&[&a, &a]).unwrap().n_rows(), 4);
    }
}
