use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::GroupKey;
use crate::seed::rng_for;

pub type Split = (Vec<usize>, Vec<usize>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FoldUnit {
    /// Windows are assigned to folds independently.
    #[default]
    Window,
    /// All windows of a participant share a fold.
    Participant,
}

fn complement(n: usize, test: &[usize]) -> Vec<usize> {
    let mut in_test = vec![false; n];
    for &i in test {
        in_test[i] = true;
    }
    (0..n).filter(|&i| !in_test[i]).collect()
}

/// Deals `items` of each class round-robin into `k` folds after a seeded
/// shuffle; the second class starts where the first stopped so fold sizes
/// also stay within one.
fn deal<T: Clone>(classes: [Vec<T>; 2], k: usize, seed: u64) -> Vec<Vec<T>> {
    let mut folds = vec![Vec::new(); k];
    let mut next = 0;
    for (c, mut items) in classes.into_iter().enumerate() {
        items.shuffle(&mut rng_for(seed, &["kfold", if c == 0 { "pos" } else { "neg" }]));
        for it in items {
            folds[next % k].push(it);
            next += 1;
        }
    }
    folds
}

/// (train, test) index pairs; each class is spread over the folds as
/// evenly as possible.
pub fn stratified_kfold(y: &[bool], k: usize, seed: u64) -> Result<Vec<Split>> {
    let pos: Vec<usize> = (0..y.len()).filter(|&i| y[i]).collect();
    let neg: Vec<usize> = (0..y.len()).filter(|&i| !y[i]).collect();
    if k < 2 {
        return Err(Error::InvalidParameter(format!("k = {k}; need at least 2 folds")));
    }
    if k > pos.len().min(neg.len()) {
        return Err(Error::InvalidParameter(format!(
            "k = {k} exceeds the smaller class ({} Anxious, {} NonAnxious)",
            pos.len(),
            neg.len()
        )));
    }
    Ok(deal([pos, neg], k, seed)
        .into_iter()
        .map(|mut test| {
            test.sort_unstable();
            (complement(y.len(), &test), test)
        })
        .collect())
}

/// Participant-level folds, stratified by each participant's majority label.
pub fn grouped_kfold(y: &[bool], groups: &[GroupKey], k: usize, seed: u64) -> Result<Vec<Split>> {
    let mut members: BTreeMap<(&str, &str), (usize, Vec<usize>)> = BTreeMap::new();
    for (i, g) in groups.iter().enumerate() {
        let e = members.entry((g.dataset.as_str(), g.participant.as_str())).or_default();
        e.0 += usize::from(y[i]);
        e.1.push(i);
    }
    if k < 2 || members.len() < k {
        return Err(Error::InvalidParameter(format!(
            "k = {k} with {} participants; need 2 ≤ k ≤ participants",
            members.len()
        )));
    }
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (_, (anxious, rows)) in members {
        if 2 * anxious >= rows.len() {
            pos.push(rows);
        } else {
            neg.push(rows);
        }
    }
    Ok(deal([pos, neg], k, seed)
        .into_iter()
        .map(|fold| {
            let mut test: Vec<usize> = fold.concat();
            test.sort_unstable();
            (complement(y.len(), &test), test)
        })
        .collect())
}
