use ndarray::Array2;

use crate::error::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-9;

/// Discrete optimal-transport problem between weighted point sets.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportProblem {
    pub cost: Array2<f64>,
    pub source: Vec<f64>,
    pub target: Vec<f64>,
    pub epsilon: f64,
}

/// A coupling and its transport cost `⟨plan, cost⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OtddResult {
    pub distance: f64,
    pub plan: Array2<f64>,
    pub converged: bool,
    pub iterations: usize,
}

fn check_simplex(w: &[f64], what: &str) -> Result<()> {
    if w.is_empty() {
        return Err(Error::InvalidParameter(format!("{what} weights are empty")));
    }
    if w.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidParameter(format!("{what} weights must be finite and non-negative")));
    }
    let s: f64 = w.iter().sum();
    if (s - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::InvalidParameter(format!("{what} weights sum to {s}, not 1")));
    }
    Ok(())
}

impl TransportProblem {
    pub fn new(cost: Array2<f64>, source: Vec<f64>, target: Vec<f64>, epsilon: f64) -> Result<Self> {
        check_simplex(&source, "source")?;
        check_simplex(&target, "target")?;
        if cost.dim() != (source.len(), target.len()) {
            return Err(Error::InvalidParameter(format!(
                "cost is {:?} but weights are {}×{}",
                cost.dim(),
                source.len(),
                target.len()
            )));
        }
        if cost.iter().any(|c| !c.is_finite() || *c < 0.0) {
            return Err(Error::InvalidParameter("cost entries must be finite and non-negative".into()));
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidParameter(format!("regularization {epsilon} must be finite and ≥ 0")));
        }
        Ok(Self {
            cost,
            source,
            target,
            epsilon,
        })
    }

    pub fn uniform(cost: Array2<f64>, epsilon: f64) -> Result<Self> {
        let (n, m) = cost.dim();
        Self::new(cost, vec![1.0 / n as f64; n], vec![1.0 / m as f64; m], epsilon)
    }

    /// Σ|row sums − source| + Σ|column sums − target|.
    pub fn marginal_violation(&self, plan: &Array2<f64>) -> f64 {
        let rows: f64 = plan
            .rows()
            .into_iter()
            .zip(&self.source)
            .map(|(r, a)| (r.sum() - a).abs())
            .sum();
        let cols: f64 = plan
            .columns()
            .into_iter()
            .zip(&self.target)
            .map(|(c, b)| (c.sum() - b).abs())
            .sum();
        rows + cols
    }
}

pub(crate) fn transport_cost(plan: &Array2<f64>, cost: &Array2<f64>) -> f64 {
    plan.iter().zip(cost).map(|(p, c)| p * c).sum::<f64>().max(0.0)
}
