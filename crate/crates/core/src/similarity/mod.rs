//! Dataset similarity by optimal transport.
//!
//! The ground cost between two labelled points is their squared feature
//! distance plus the squared Wasserstein distance between Gaussian fits of
//! their classes. The coupling comes from an entropic Sinkhorn solver; an
//! exact min-cost-flow solver serves as its oracle on small problems.

mod exact;
mod otdd;
mod problem;
mod sinkhorn;

pub use exact::{exact_ot_small, EXACT_MAX_CELLS};
pub use otdd::{bures_wasserstein_sq, ground_cost, otdd, otdd_per_set, Gaussian, OtSolver, OtddParams};
pub use problem::{OtddResult, TransportProblem};
pub use sinkhorn::{sinkhorn, MARGINAL_TOLERANCE, MAX_ITERATIONS};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;
    use ndarray::Array2;
    use rand::Rng;

    #[test]
    fn sinkhorn_agrees_with_exact_on_random_problems() {
        let mut r = rng(8);
        for case in 0..50 {
            let n = r.random_range(2..=8);
            let m = r.random_range(2..=8);
            let cost = Array2::from_shape_fn((n, m), |_| r.random::<f64>());
            let mut w = |k: usize| {
                let v: Vec<f64> = (0..k).map(|_| r.random_range(0.1..1.0)).collect();
                let s: f64 = v.iter().sum();
                v.into_iter().map(|x| x / s).collect::<Vec<_>>()
            };
            let (a, b) = (w(n), w(m));
            let p = TransportProblem::new(cost, a, b, 1e-3).unwrap();
            let s = sinkhorn(&p).unwrap();
            let e = exact_ot_small(&p).unwrap();
            assert!(p.marginal_violation(&e.plan) < 1e-12, "case {case}");
            assert!(p.marginal_violation(&s.plan) < 1e-12, "case {case}");
            assert!((s.distance - e.distance).abs() <= 0.01 * e.distance, "case {case}: {} vs {}", s.distance, e.distance);
        }
    }
}
