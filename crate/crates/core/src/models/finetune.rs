use ndarray::Axis;
use rand::seq::SliceRandom;

use super::{ClassifierId, MlpSpec, Params, TrainedModel};
use crate::error::{Error, Result};
use crate::eval::EvalTuple;
use crate::features::FeatureMatrix;
use crate::seed::rng_for;

#[derive(Debug, Clone)]
pub struct FinetuneReport {
    pub model: TrainedModel,
    /// Held-out test metrics of the fine-tuned network.
    pub test: EvalTuple,
    /// The same test rows scored by the network before fine-tuning.
    pub before: EvalTuple,
    /// 0 means the starting weights had the lowest validation loss.
    pub best_epoch: usize,
    pub validation_loss: Vec<f64>,
}

/// Seeded shuffle cut into round(0.7 n) / round(0.15 n) / remainder.
pub fn split_70_15_15(n: usize, seed: u64) -> Result<[Vec<usize>; 3]> {
    let n_train = (0.7 * n as f64).round() as usize;
    let n_val = (0.15 * n as f64).round() as usize;
    let n_test = n.saturating_sub(n_train + n_val);
    if n_train < 2 || n_val < 2 || n_test < 2 {
        return Err(Error::SplitTooSmall(format!(
            "{n} rows give {n_train}/{n_val}/{n_test}; every part needs at least 2"
        )));
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng_for(seed, &["finetune", "split"]));
    let test = idx.split_off(n_train + n_val);
    let val = idx.split_off(n_train);
    Ok([idx, val, test])
}

/// Continues Adam training of a DNN on new rows and keeps the epoch with
/// the lowest validation loss.
pub fn finetune_mlp(model: &TrainedModel, data: &FeatureMatrix, spec: &MlpSpec, seed: u64) -> Result<FinetuneReport> {
    let Params::Mlp(start) = &model.params else {
        return Err(Error::InvalidParameter(format!("fine-tuning needs a DNN, got {}", model.id)));
    };
    model.check_schema(&data.feature_names())?;
    let [tr, va, te] = split_70_15_15(data.n_rows(), seed)?;
    let x = match &model.scaler {
        Some(s) => s.transform(&data.data),
        None => data.data.clone(),
    };
    let t: Vec<f64> = data.targets().iter().map(|&b| f64::from(u8::from(b))).collect();
    let part = |rows: &[usize]| (x.select(Axis(0), rows), rows.iter().map(|&i| t[i]).collect::<Vec<f64>>());
    let (x_tr, t_tr) = part(&tr);
    let (x_va, t_va) = part(&va);
    let (x_te, _) = part(&te);
    let y_te: Vec<bool> = te.iter().map(|&i| t[i] > 0.5).collect();

    let mut net = start.clone();
    let mut best = (start.loss(x_va.view(), &t_va), 0usize, start.clone());
    let mut validation_loss = Vec::with_capacity(spec.epochs);
    let mut rng = rng_for(seed, &["finetune", "shuffle"]);
    net.train_epochs(x_tr.view(), &t_tr, spec, &mut rng, spec.epochs, |e, m| {
        let l = m.loss(x_va.view(), &t_va);
        validation_loss.push(l);
        if l < best.0 {
            best = (l, e + 1, m.clone());
        }
    });
    let (_, best_epoch, best_net) = best;
    let (before, _) = EvalTuple::from_scores(ClassifierId::Dnn, &start.predict(x_te.view()), &y_te);
    let (test, _) = EvalTuple::from_scores(ClassifierId::Dnn, &best_net.predict(x_te.view()), &y_te);
    Ok(FinetuneReport {
        model: TrainedModel {
            params: Params::Mlp(best_net),
            ..model.clone()
        },
        test,
        before,
        best_epoch,
        validation_loss,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn split_sizes_and_determinism() {
        let [a, b, c] = split_70_15_15(100, 42).unwrap();
        assert_eq!((a.len(), b.len(), c.len()), (70, 15, 15));
        assert_eq!(split_70_15_15(100, 42).unwrap(), [a.clone(), b, c]);
        let mut all: Vec<usize> = split_70_15_15(100, 42).unwrap().concat();
        all.sort_unstable();
        assert_eq!(all, (0..100).collect::<Vec<_>>());
    }

    #[test]
    fn ten_rows_is_too_small() {
        assert!(matches!(split_70_15_15(10, 42), Err(Error::SplitTooSmall(_))));
    }
}
