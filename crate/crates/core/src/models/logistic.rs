use nalgebra::{DMatrix, DVector};
use ndarray::{s, Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LogisticParams {
    pub l2: f64,
    pub tolerance: f64,
    pub max_iter: usize,
}

impl Default for LogisticParams {
    fn default() -> Self {
        Self {
            l2: 1e-3,
            tolerance: 1e-6,
            max_iter: 100,
        }
    }
}

/// L2-regularised logistic regression (intercept unpenalised) fitted by
/// damped Newton iterations with a backtracking line search on the mean loss.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRegression {
    pub weights: Array1<f64>,
    pub intercept: f64,
    pub iterations: usize,
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// ln(1 + e^z) without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

/// `[X 1]`: the design matrix with the intercept column appended.
fn augment(x: ArrayView2<f64>) -> Array2<f64> {
    let mut a = Array2::ones((x.nrows(), x.ncols() + 1));
    a.slice_mut(s![.., ..x.ncols()]).assign(&x);
    a
}

fn loss(a: &Array2<f64>, t: &Array1<f64>, theta: &Array1<f64>, l2: f64) -> f64 {
    let p = theta.len() - 1;
    let z = a.dot(theta);
    let data = z.iter().zip(t).map(|(&z, &t)| softplus(z) - t * z).sum::<f64>() / t.len() as f64;
    let w = theta.slice(s![..p]);
    data + 0.5 * l2 * w.dot(&w)
}

impl LogisticRegression {
    pub fn fit(x: ArrayView2<f64>, y: &[bool], params: &LogisticParams) -> Self {
        let n = x.nrows() as f64;
        let p = x.ncols();
        let a = augment(x);
        let t = Array1::from_iter(y.iter().map(|&b| f64::from(u8::from(b))));
        let mut theta = Array1::<f64>::zeros(p + 1);
        let mut current = loss(&a, &t, &theta, params.l2);
        let mut iterations = 0;
        for it in 0..params.max_iter {
            iterations = it + 1;
            let prob = a.dot(&theta).mapv(sigmoid);
            let mut grad = a.t().dot(&(&prob - &t)) / n;
            grad.slice_mut(s![..p]).scaled_add(params.l2, &theta.slice(s![..p]));
            if grad.dot(&grad).sqrt() < params.tolerance {
                break;
            }
            let weight = prob.mapv(|q| q * (1.0 - q));
            let weighted = &a * &weight.view().insert_axis(Axis(1));
            let mut h = a.t().dot(&weighted) / n;
            for j in 0..p {
                h[[j, j]] += params.l2;
            }
            // Keeps the intercept direction solvable when every probability
            // saturates.
            h[[p, p]] += 1e-12;
            let hm = DMatrix::from_fn(p + 1, p + 1, |i, j| h[[i, j]]);
            let gv = DVector::from_iterator(p + 1, grad.iter().copied());
            let dir = match hm.cholesky() {
                Some(c) => Array1::from_iter(c.solve(&gv).iter().copied()),
                None => grad.clone(),
            };
            let slope = grad.dot(&dir);
            let mut step = 1.0;
            loop {
                let cand = &theta - &(step * &dir);
                let l = loss(&a, &t, &cand, params.l2);
                if l <= current - 1e-4 * step * slope || step < 1e-10 {
                    theta = cand;
                    current = l;
                    break;
                }
                step *= 0.5;
            }
        }
        Self {
            weights: theta.slice(s![..p]).to_owned(),
            intercept: theta[p],
            iterations,
        }
    }

    pub fn decision(&self, x: ArrayView2<f64>) -> Array1<f64> {
        x.dot(&self.weights) + self.intercept
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        self.decision(x).mapv(sigmoid).to_vec()
    }

    /// Gradient of the mean regularised loss at the fitted parameters.
    pub fn gradient_norm(&self, x: ArrayView2<f64>, y: &[bool], l2: f64) -> f64 {
        let n = x.nrows() as f64;
        let t = Array1::from_iter(y.iter().map(|&b| f64::from(u8::from(b))));
        let r = self.decision(x).mapv(sigmoid) - &t;
        let gw = x.t().dot(&r) / n + l2 * &self.weights;
        let gb = r.sum_axis(Axis(0)).into_scalar() / n;
        (gw.dot(&gw) + gb * gb).sqrt()
    }
}
