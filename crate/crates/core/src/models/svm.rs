use ndarray::{Array1, ArrayView2};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SvmParams {
    pub lambda: f64,
    pub iterations: usize,
}

impl Default for SvmParams {
    fn default() -> Self {
        Self {
            lambda: 1e-2,
            iterations: 2000,
        }
    }
}

/// Linear soft-margin SVM: minimises `λ/2 ‖(w, b)‖² + mean hinge` by
/// full-batch subgradient steps `1/(λt)`, projected onto the ball of radius
/// `1/√λ`. The returned parameters average the second half of the iterates.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSvm {
    pub weights: Array1<f64>,
    pub intercept: f64,
}

impl LinearSvm {
    pub fn fit(x: ArrayView2<f64>, y: &[bool], params: &SvmParams) -> Self {
        let n = x.nrows() as f64;
        let p = x.ncols();
        let s = Array1::from_iter(y.iter().map(|&b| if b { 1.0 } else { -1.0 }));
        let mut w = Array1::<f64>::zeros(p);
        let mut b = 0.0;
        let mut w_avg = Array1::<f64>::zeros(p);
        let mut b_avg = 0.0;
        let half = params.iterations / 2;
        let radius = 1.0 / params.lambda.sqrt();
        for t in 1..=params.iterations {
            let margin = (x.dot(&w) + b) * &s;
            let active = margin.mapv(|m| if m < 1.0 { 1.0 } else { 0.0 }) * &s;
            let gw = params.lambda * &w - x.t().dot(&active) / n;
            let gb = params.lambda * b - active.sum() / n;
            let eta = 1.0 / (params.lambda * t as f64);
            w.scaled_add(-eta, &gw);
            b -= eta * gb;
            let norm = (w.dot(&w) + b * b).sqrt();
            if norm > radius {
                w *= radius / norm;
                b *= radius / norm;
            }
            if t > half {
                w_avg += &w;
                b_avg += b;
            }
        }
        let k = (params.iterations - half).max(1) as f64;
        Self {
            weights: w_avg / k,
            intercept: b_avg / k,
        }
    }

    /// Signed margin; positive means Anxious.
    pub fn decision(&self, x: ArrayView2<f64>) -> Vec<f64> {
        (x.dot(&self.weights) + self.intercept).to_vec()
    }
}
