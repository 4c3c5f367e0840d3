//! Plain-text model files:
//!
//! ```text
//! anxbench-model 1
//! classifier C2
//! seed 42
//! features 3
//! feature:F1:MeanNN
//! ...
//! scaler 0            (or `scaler p` followed by p means then p SDs)
//! params 1234
//! <one value per line, 17 significant digits>
//! ```

use std::fmt::Write as _;
use std::path::Path;

use ndarray::{Array1, Array2};

use super::{ClassifierId, GradientBoosting, LinearSvm, LogisticRegression, Mlp, Params, RandomForest, TrainedModel, Tree};
use crate::error::{Error, Result};
use crate::features::Standardizer;

const MAGIC: &str = "anxbench-model 1";

fn flatten(p: &Params) -> Vec<f64> {
    let mut out = Vec::new();
    match p {
        Params::Logistic(m) => {
            out.push(m.weights.len() as f64);
            out.extend(m.weights.iter());
            out.push(m.intercept);
            out.push(m.iterations as f64);
        }
        Params::Svm(m) => {
            out.push(m.weights.len() as f64);
            out.extend(m.weights.iter());
            out.push(m.intercept);
        }
        Params::Tree(t) => t.to_flat(&mut out),
        Params::Forest(f) => {
            out.push(f.importance.len() as f64);
            out.extend(&f.importance);
            out.push(f.trees.len() as f64);
            for t in &f.trees {
                t.to_flat(&mut out);
            }
        }
        Params::Boost(b) => {
            out.extend([b.init, b.learning_rate, b.trees.len() as f64]);
            for t in &b.trees {
                t.to_flat(&mut out);
            }
        }
        Params::Mlp(m) => {
            out.push(m.weights.len() as f64);
            for (w, b) in m.weights.iter().zip(&m.biases) {
                out.extend([w.nrows() as f64, w.ncols() as f64]);
                out.extend(w.iter());
                out.extend(b.iter());
            }
            out.push(m.curve.len() as f64);
            out.extend(&m.curve);
        }
    }
    out
}

fn take(it: &mut impl Iterator<Item = f64>, n: usize) -> Option<Vec<f64>> {
    let v: Vec<f64> = it.take(n).collect();
    (v.len() == n).then_some(v)
}

fn unflatten(id: ClassifierId, flat: Vec<f64>) -> Option<Params> {
    let it = &mut flat.into_iter();
    let params = match id {
        ClassifierId::C1 => {
            let p = it.next()? as usize;
            let w = Array1::from(take(it, p)?);
            Params::Logistic(LogisticRegression {
                weights: w,
                intercept: it.next()?,
                iterations: it.next()? as usize,
            })
        }
        ClassifierId::C4 => {
            let p = it.next()? as usize;
            Params::Svm(LinearSvm {
                weights: Array1::from(take(it, p)?),
                intercept: it.next()?,
            })
        }
        ClassifierId::C3 => Params::Tree(Tree::from_flat(it)?),
        ClassifierId::C2 => {
            let p = it.next()? as usize;
            let importance = take(it, p)?;
            let k = it.next()? as usize;
            let trees = (0..k).map(|_| Tree::from_flat(it)).collect::<Option<Vec<_>>>()?;
            Params::Forest(RandomForest { trees, importance })
        }
        ClassifierId::C5 => {
            let init = it.next()?;
            let learning_rate = it.next()?;
            let k = it.next()? as usize;
            let trees = (0..k).map(|_| Tree::from_flat(it)).collect::<Option<Vec<_>>>()?;
            Params::Boost(GradientBoosting {
                init,
                learning_rate,
                trees,
            })
        }
        ClassifierId::Dnn => {
            let layers = it.next()? as usize;
            let mut weights = Vec::with_capacity(layers);
            let mut biases = Vec::with_capacity(layers);
            for _ in 0..layers {
                let (r, c) = (it.next()? as usize, it.next()? as usize);
                weights.push(Array2::from_shape_vec((r, c), take(it, r * c)?).ok()?);
                biases.push(Array1::from(take(it, c)?));
            }
            let k = it.next()? as usize;
            Params::Mlp(Mlp {
                weights,
                biases,
                curve: take(it, k)?,
            })
        }
    };
    it.next().is_none().then_some(params)
}

impl TrainedModel {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{MAGIC}");
        let _ = writeln!(s, "classifier {}", self.id);
        let _ = writeln!(s, "seed {}", self.seed);
        let _ = writeln!(s, "features {}", self.feature_names.len());
        for n in &self.feature_names {
            let _ = writeln!(s, "{n}");
        }
        match &self.scaler {
            Some(sc) => {
                let _ = writeln!(s, "scaler {}", sc.mean.len());
                for v in sc.mean.iter().chain(sc.sd.iter()) {
                    let _ = writeln!(s, "{v:.16e}");
                }
            }
            None => {
                let _ = writeln!(s, "scaler 0");
            }
        }
        let flat = flatten(&self.params);
        let _ = writeln!(s, "params {}", flat.len());
        for v in flat {
            let _ = writeln!(s, "{v:.16e}");
        }
        s
    }

    pub fn from_text(text: &str, origin: &Path) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |what: &str| lines.next().ok_or_else(|| Error::parse(origin, 0, format!("truncated before {what}")));
        let (ln, magic) = next("header")?;
        if magic != MAGIC {
            return Err(Error::parse(origin, ln, "not a model file"));
        }
        let mut field = |key: &str| -> Result<(usize, String)> {
            let (ln, l) = next(key)?;
            l.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(|v| (ln, v.to_string()))
                .ok_or_else(|| Error::parse(origin, ln, format!("expected `{key} …`")))
        };
        let (ln, id) = field("classifier")?;
        let id: ClassifierId = id.parse().map_err(|e: Error| Error::parse(origin, ln, e.to_string()))?;
        let (ln, seed) = field("seed")?;
        let seed: u64 = seed.parse().map_err(|_| Error::parse(origin, ln, "bad seed"))?;
        let (ln, count) = field("features")?;
        let count: usize = count.parse().map_err(|_| Error::parse(origin, ln, "bad feature count"))?;
        let mut body = text.lines().enumerate().skip(4).map(|(i, l)| (i + 1, l));
        let feature_names: Vec<String> = body.by_ref().take(count).map(|(_, l)| l.to_string()).collect();
        if feature_names.len() != count {
            return Err(Error::parse(origin, 0, "truncated feature list"));
        }
        let number = |body: &mut dyn Iterator<Item = (usize, &str)>| -> Result<f64> {
            let (ln, l) = body.next().ok_or_else(|| Error::parse(origin, 0, "truncated values"))?;
            l.trim().parse().map_err(|_| Error::parse(origin, ln, format!("bad number {l:?}")))
        };
        let header = |body: &mut dyn Iterator<Item = (usize, &str)>, key: &str| -> Result<usize> {
            let (ln, l) = body.next().ok_or_else(|| Error::parse(origin, 0, format!("missing {key}")))?;
            l.strip_prefix(key)
                .and_then(|r| r.trim().parse().ok())
                .ok_or_else(|| Error::parse(origin, ln, format!("expected `{key} <n>`")))
        };
        let p = header(&mut body, "scaler")?;
        let scaler = if p > 0 {
            let v = (0..2 * p).map(|_| number(&mut body)).collect::<Result<Vec<_>>>()?;
            Some(Standardizer {
                mean: Array1::from(v[..p].to_vec()),
                sd: Array1::from(v[p..].to_vec()),
            })
        } else {
            None
        };
        let k = header(&mut body, "params")?;
        let flat = (0..k).map(|_| number(&mut body)).collect::<Result<Vec<_>>>()?;
        let params = unflatten(id, flat).ok_or_else(|| Error::parse(origin, 0, format!("malformed {id} parameters")))?;
        Ok(Self {
            id,
            feature_names,
            seed,
            scaler,
            params,
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_text(&std::fs::read_to_string(path)?, path)
    }
}

#[cfg(test)]
mod tests {
    use super::super::{train_arrays, Hyper, MlpSpec};
    use super::*;

    #[test]
    fn round_trip_every_classifier() {
        let x = Array2::from_shape_fn((40, 3), |(i, j)| ((i * 7 + j * 3) % 11) as f64 + 0.25 * j as f64);
        let y: Vec<bool> = (0..40).map(|i| (i * 7) % 11 > 5).collect();
        let names: Vec<String> = (0..3).map(|i| format!("feature:F1:x{i}")).collect();
        let hyper = Hyper {
            mlp: MlpSpec {
                hidden: vec![4, 3],
                epochs: 2,
                ..MlpSpec::default()
            },
            ..Hyper::default()
        };
        for id in ClassifierId::ALL {
            let m = train_arrays(id, x.view(), &y, names.clone(), &hyper, 3).unwrap();
            let back = TrainedModel::from_text(&m.to_text(), Path::new("mem")).unwrap();
            assert_eq!(back, m, "{id}");
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(TrainedModel::from_text("hello", Path::new("mem")).is_err());
    }
}
