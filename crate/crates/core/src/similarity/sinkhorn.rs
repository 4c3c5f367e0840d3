use ndarray::Array2;

use super::problem::{transport_cost, OtddResult, TransportProblem};
use crate::error::{Error, Result};

pub const MARGINAL_TOLERANCE: f64 = 1e-9;
pub const MAX_ITERATIONS: usize = 10_000;

/// Intermediate annealing stages stop at this looser violation or sweep
/// count; only the final stage needs to be precise.
const STAGE_TOLERANCE: f64 = 1e-6;
const STAGE_SWEEPS: usize = 100;

fn log_sum_exp(v: impl Iterator<Item = f64> + Clone) -> f64 {
    let m = v.clone().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.map(|x| (x - m).exp()).sum::<f64>().ln()
}

struct Potentials {
    f: Vec<f64>,
    g: Vec<f64>,
}

impl Potentials {
    fn plan(&self, cost: &Array2<f64>, eps: f64) -> Array2<f64> {
        Array2::from_shape_fn(cost.dim(), |(i, j)| ((self.f[i] + self.g[j] - cost[[i, j]]) / eps).exp())
    }

    /// One f-update then one g-update; columns are exact afterwards, so the
    /// returned violation is the row error alone.
    fn sweep(&mut self, cost: &Array2<f64>, la: &[f64], lb: &[f64], eps: f64) -> f64 {
        let (n, m) = cost.dim();
        for i in 0..n {
            let row = cost.row(i);
            let g = &self.g;
            self.f[i] = eps * la[i] - eps * log_sum_exp((0..m).map(|j| (g[j] - row[j]) / eps));
        }
        for j in 0..m {
            let col = cost.column(j);
            let f = &self.f;
            self.g[j] = eps * lb[j] - eps * log_sum_exp((0..n).map(|i| (f[i] - col[i]) / eps));
        }
        (0..n)
            .map(|i| {
                let r = log_sum_exp((0..m).map(|j| (self.f[i] + self.g[j] - cost[[i, j]]) / eps));
                (r.exp() - la[i].exp()).abs()
            })
            .sum()
    }
}

/// Projects a near-feasible plan onto the transport polytope: rows and
/// columns are scaled down to their marginals, then the deficits are
/// restored by a rank-one correction.
fn round_to_marginals(mut plan: Array2<f64>, a: &[f64], b: &[f64]) -> Array2<f64> {
    for (mut row, &ai) in plan.rows_mut().into_iter().zip(a) {
        let s = row.sum();
        if s > ai {
            row *= ai / s;
        }
    }
    for (mut col, &bj) in plan.columns_mut().into_iter().zip(b) {
        let s = col.sum();
        if s > bj {
            col *= bj / s;
        }
    }
    let er: Vec<f64> = plan.rows().into_iter().zip(a).map(|(r, &ai)| (ai - r.sum()).max(0.0)).collect();
    let ec: Vec<f64> = plan.columns().into_iter().zip(b).map(|(c, &bj)| (bj - c.sum()).max(0.0)).collect();
    let total: f64 = er.iter().sum();
    if total > 0.0 {
        for ((i, j), v) in plan.indexed_iter_mut() {
            *v += er[i] * ec[j] / total;
        }
    }
    plan
}

/// Entropy-regularised OT by log-domain Sinkhorn scaling with ε-annealing:
/// the regularisation halves from the largest cost down to ε, warm-starting
/// each stage. Stops once the marginal violation is below 1e-9 at the target
/// ε or after 10 000 sweeps in total; the partial result is then returned
/// with `converged = false`. The plan is rounded onto the exact marginals in
/// either case.
pub fn sinkhorn(problem: &TransportProblem) -> Result<OtddResult> {
    let eps = problem.epsilon;
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("sinkhorn needs a regularization ε > 0".into()));
    }
    let cost = &problem.cost;
    let la: Vec<f64> = problem.source.iter().map(|a| a.ln()).collect();
    let lb: Vec<f64> = problem.target.iter().map(|b| b.ln()).collect();
    let mut pot = Potentials {
        f: vec![0.0; la.len()],
        g: vec![0.0; lb.len()],
    };
    let top = cost.iter().copied().fold(0.0, f64::max);
    let mut stages = Vec::new();
    let mut e = top;
    while e > eps {
        stages.push(e);
        e *= 0.5;
    }
    stages.push(eps);

    let mut iterations = 0;
    let mut violation = f64::INFINITY;
    let last = stages.len() - 1;
    for (s, &stage_eps) in stages.iter().enumerate() {
        let (tol, budget) = if s == last {
            (MARGINAL_TOLERANCE, MAX_ITERATIONS)
        } else {
            (STAGE_TOLERANCE, (iterations + STAGE_SWEEPS).min(MAX_ITERATIONS / 2))
        };
        loop {
            if iterations >= budget {
                break;
            }
            violation = pot.sweep(cost, &la, &lb, stage_eps);
            iterations += 1;
            if violation < tol {
                break;
            }
        }
    }
    let plan = round_to_marginals(pot.plan(cost, eps), &problem.source, &problem.target);
    Ok(OtddResult {
        distance: transport_cost(&plan, cost),
        plan,
        converged: violation < MARGINAL_TOLERANCE,
        iterations,
    })
}
