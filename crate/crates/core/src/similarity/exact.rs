use ndarray::Array2;

use super::problem::{transport_cost, OtddResult, TransportProblem};
use crate::error::{Error, Result};

/// Largest n·m the exact solver accepts.
pub const EXACT_MAX_CELLS: usize = 40_000;

const FLOW_EPS: f64 = 1e-15;

/// Exact (unregularised) optimal transport by successive shortest augmenting
/// paths on the bipartite network sources → sinks. Dijkstra runs on reduced
/// costs kept non-negative by node potentials, so every search yields a
/// tree. Meant as an oracle for small problems; `epsilon` is ignored.
pub fn exact_ot_small(problem: &TransportProblem) -> Result<OtddResult> {
    let cost = &problem.cost;
    let (n, m) = cost.dim();
    if n * m > EXACT_MAX_CELLS {
        return Err(Error::InvalidParameter(format!(
            "exact solver limited to {EXACT_MAX_CELLS} cells, got {n}×{m}"
        )));
    }
    let mut supply = problem.source.clone();
    let mut demand = problem.target.clone();
    let mut flow = Array2::<f64>::zeros((n, m));
    // Nodes 0..n are sources, n..n+m sinks.
    let mut potential = vec![0.0; n + m];
    let mut iterations = 0;
    while supply.iter().sum::<f64>() > 1e-13 && demand.iter().any(|&d| d > FLOW_EPS) {
        iterations += 1;
        if iterations > 4 * (n + m) * (n + m) {
            return Err(Error::Invariant("exact OT exceeded its augmentation budget".into()));
        }
        let mut dist = vec![f64::INFINITY; n + m];
        let mut prev = vec![usize::MAX; n + m];
        let mut done = vec![false; n + m];
        for i in 0..n {
            if supply[i] > FLOW_EPS {
                dist[i] = 0.0;
            }
        }
        loop {
            let Some(u) = (0..n + m)
                .filter(|&v| !done[v] && dist[v].is_finite())
                .min_by(|&a, &b| dist[a].total_cmp(&dist[b]))
            else {
                break;
            };
            done[u] = true;
            if u < n {
                for j in 0..m {
                    let v = n + j;
                    let reduced = (cost[[u, j]] + potential[u] - potential[v]).max(0.0);
                    if !done[v] && dist[u] + reduced < dist[v] {
                        dist[v] = dist[u] + reduced;
                        prev[v] = u;
                    }
                }
            } else {
                let j = u - n;
                for i in 0..n {
                    if flow[[i, j]] > FLOW_EPS && !done[i] {
                        let reduced = (potential[u] - potential[i] - cost[[i, j]]).max(0.0);
                        if dist[u] + reduced < dist[i] {
                            dist[i] = dist[u] + reduced;
                            prev[i] = u;
                        }
                    }
                }
            }
        }
        let Some(sink) = (0..m)
            .filter(|&j| demand[j] > FLOW_EPS && dist[n + j].is_finite())
            .min_by(|&a, &b| dist[n + a].total_cmp(&dist[n + b]))
        else {
            return Err(Error::Invariant("exact OT found no augmenting path".into()));
        };
        let reach = dist[n + sink];
        for v in 0..n + m {
            potential[v] += dist[v].min(reach);
        }
        let mut path = Vec::new();
        let mut v = n + sink;
        let mut amount = demand[sink];
        while prev[v] != usize::MAX {
            let u = prev[v];
            if v >= n {
                path.push((u, v - n, true));
            } else {
                amount = amount.min(flow[[v, u - n]]);
                path.push((v, u - n, false));
            }
            v = u;
        }
        amount = amount.min(supply[v]);
        for &(i, j, forward) in &path {
            if forward {
                flow[[i, j]] += amount;
            } else {
                flow[[i, j]] -= amount;
            }
        }
        supply[v] -= amount;
        demand[sink] -= amount;
    }
    flow.mapv_inplace(|f| f.max(0.0));
    Ok(OtddResult {
        distance: transport_cost(&flow, cost),
        plan: flow,
        converged: true,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for k in 0..=p.len() {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn two_by_two_is_zero() {
        let p = TransportProblem::uniform(array![[0.0, 1.0], [1.0, 0.0]], 0.0).unwrap();
        let r = exact_ot_small(&p).unwrap();
        assert!(r.distance.abs() < 1e-15);
        assert_eq!(r.plan, array![[0.5, 0.0], [0.0, 0.5]]);
    }

    #[test]
    fn constant_cost_is_one() {
        let p = TransportProblem::new(Array2::ones((3, 4)), vec![0.2, 0.3, 0.5], vec![0.25; 4], 0.0).unwrap();
        let r = exact_ot_small(&p).unwrap();
        assert!((r.distance - 1.0).abs() < 1e-12);
        assert!(p.marginal_violation(&r.plan) < 1e-12);
    }

    #[test]
    fn one_dimensional_matches_sorted_matching() {
        let x: [f64; 3] = [0.3, -1.2, 2.0];
        let y = [1.1, 0.0, -0.4];
        let cost = Array2::from_shape_fn((3, 3), |(i, j)| (x[i] - y[j]).powi(2));
        let r = exact_ot_small(&TransportProblem::uniform(cost, 0.0).unwrap()).unwrap();
        let mut xs = x.to_vec();
        let mut ys = y.to_vec();
        xs.sort_by(f64::total_cmp);
        ys.sort_by(f64::total_cmp);
        let closed: f64 = xs.iter().zip(&ys).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / 3.0;
        assert!((r.distance - closed).abs() < 1e-12);
    }

    #[test]
    fn uniform_square_matches_best_permutation() {
        let mut state = 0x2545_f491_4f6c_dd1d_u64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for n in 1..=6 {
            for _ in 0..5 {
                let cost = Array2::from_shape_fn((n, n), |_| next());
                let best = permutations(n)
                    .iter()
                    .map(|p| p.iter().enumerate().map(|(i, &j)| cost[[i, j]]).sum::<f64>() / n as f64)
                    .fold(f64::INFINITY, f64::min);
                let r = exact_ot_small(&TransportProblem::uniform(cost, 0.0).unwrap()).unwrap();
                assert!((r.distance - best).abs() < 1e-12, "n = {n}: {} vs {best}", r.distance);
            }
        }
    }
}
