use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::seed::{rng_for, Rng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MlpSpec {
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

impl Default for MlpSpec {
    fn default() -> Self {
        Self {
            hidden: vec![256, 128, 64, 32, 16],
            learning_rate: 1e-4,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            epochs: 30,
            batch_size: 32,
        }
    }
}

/// Dense ReLU network with one sigmoid output, trained on binary
/// cross-entropy.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    /// `weights[l]` maps layer `l` (fan-in rows) to layer `l + 1`.
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
    /// Mean training loss after each epoch.
    pub curve: Vec<f64>,
}

pub struct Gradients {
    pub weights: Vec<Array2<f64>>,
    pub biases: Vec<Array1<f64>>,
}

struct Adam {
    m: Gradients,
    v: Gradients,
    t: i32,
}

fn softplus(z: f64) -> f64 {
    if z > 0.0 {
        z + (-z).exp().ln_1p()
    } else {
        z.exp().ln_1p()
    }
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl Mlp {
    /// He-normal hidden weights, `N(0, 1/fan_in)` output weights, zero biases.
    pub fn init(inputs: usize, hidden: &[usize], seed: u64) -> Self {
        let mut rng = rng_for(seed, &["mlp", "init"]);
        let sizes: Vec<usize> = std::iter::once(inputs).chain(hidden.iter().copied()).chain([1]).collect();
        let last = sizes.len() - 2;
        let mut weights = Vec::new();
        let mut biases = Vec::new();
        for (l, w) in sizes.windows(2).enumerate() {
            let gain = if l == last { 1.0 } else { 2.0 };
            let d = Normal::new(0.0, (gain / w[0].max(1) as f64).sqrt()).expect("positive variance");
            weights.push(Array2::from_shape_simple_fn((w[0], w[1]), || d.sample(&mut rng)));
            biases.push(Array1::zeros(w[1]));
        }
        Self {
            weights,
            biases,
            curve: Vec::new(),
        }
    }

    pub fn n_inputs(&self) -> usize {
        self.weights[0].nrows()
    }

    /// Pre-activations of every layer (the last is the output logit).
    fn forward(&self, x: ArrayView2<f64>) -> Vec<Array2<f64>> {
        let mut zs = Vec::with_capacity(self.weights.len());
        let mut a = x.to_owned();
        for (l, (w, b)) in self.weights.iter().zip(&self.biases).enumerate() {
            let z = a.dot(w) + b;
            if l + 1 < self.weights.len() {
                a = z.mapv(|v| v.max(0.0));
            }
            zs.push(z);
        }
        zs
    }

    pub fn logits(&self, x: ArrayView2<f64>) -> Vec<f64> {
        self.forward(x).pop().map(|z| z.column(0).to_vec()).unwrap_or_default()
    }

    pub fn predict(&self, x: ArrayView2<f64>) -> Vec<f64> {
        self.logits(x).into_iter().map(sigmoid).collect()
    }

    /// Mean binary cross-entropy.
    pub fn loss(&self, x: ArrayView2<f64>, t: &[f64]) -> f64 {
        let z = self.logits(x);
        z.iter().zip(t).map(|(z, t)| softplus(*z) - t * z).sum::<f64>() / t.len().max(1) as f64
    }

    pub fn loss_and_gradients(&self, x: ArrayView2<f64>, t: &[f64]) -> (f64, Gradients) {
        let n = x.nrows().max(1) as f64;
        let zs = self.forward(x);
        let out = zs.last().expect("at least one layer");
        let loss = out.column(0).iter().zip(t).map(|(z, t)| softplus(*z) - t * z).sum::<f64>() / n;
        let mut delta = Array2::from_shape_fn((x.nrows(), 1), |(i, _)| (sigmoid(out[[i, 0]]) - t[i]) / n);
        let layers = self.weights.len();
        let mut gw = vec![Array2::zeros((0, 0)); layers];
        let mut gb = vec![Array1::zeros(0); layers];
        for l in (0..layers).rev() {
            let input = if l == 0 { x.to_owned() } else { zs[l - 1].mapv(|v| v.max(0.0)) };
            gw[l] = input.t().dot(&delta);
            gb[l] = delta.sum_axis(Axis(0));
            if l > 0 {
                let mut back = delta.dot(&self.weights[l].t());
                back.zip_mut_with(&zs[l - 1], |d, z| {
                    if *z <= 0.0 {
                        *d = 0.0
                    }
                });
                delta = back;
            }
        }
        (loss, Gradients { weights: gw, biases: gb })
    }

    fn zero_like(&self) -> Gradients {
        Gradients {
            weights: self.weights.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            biases: self.biases.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
        }
    }

    fn adam_step(&mut self, g: &Gradients, st: &mut Adam, spec: &MlpSpec) {
        st.t += 1;
        let c1 = 1.0 - spec.beta1.powi(st.t);
        let c2 = 1.0 - spec.beta2.powi(st.t);
        let (b1, b2, lr, eps) = (spec.beta1, spec.beta2, spec.learning_rate, spec.epsilon);
        let update = |p: &mut f64, g: f64, m: &mut f64, v: &mut f64| {
            *m = b1 * *m + (1.0 - b1) * g;
            *v = b2 * *v + (1.0 - b2) * g * g;
            *p -= lr * (*m / c1) / ((*v / c2).sqrt() + eps);
        };
        for l in 0..self.weights.len() {
            ndarray::Zip::from(&mut self.weights[l])
                .and(&g.weights[l])
                .and(&mut st.m.weights[l])
                .and(&mut st.v.weights[l])
                .for_each(|p, g, m, v| update(p, *g, m, v));
            ndarray::Zip::from(&mut self.biases[l])
                .and(&g.biases[l])
                .and(&mut st.m.biases[l])
                .and(&mut st.v.biases[l])
                .for_each(|p, g, m, v| update(p, *g, m, v));
        }
    }

    /// Runs `epochs` passes of shuffled mini-batch Adam from the current
    /// weights (fresh optimiser state). `after_epoch` sees the network after
    /// each epoch.
    pub fn train_epochs(
        &mut self,
        x: ArrayView2<f64>,
        t: &[f64],
        spec: &MlpSpec,
        rng: &mut Rng,
        epochs: usize,
        mut after_epoch: impl FnMut(usize, &Mlp),
    ) {
        let mut st = Adam {
            m: self.zero_like(),
            v: self.zero_like(),
            t: 0,
        };
        let n = x.nrows();
        let mut order: Vec<usize> = (0..n).collect();
        let bs = spec.batch_size.max(1);
        for e in 0..epochs {
            order.shuffle(rng);
            let mut total = 0.0;
            for chunk in order.chunks(bs) {
                let xb = x.select(Axis(0), chunk);
                let tb: Vec<f64> = chunk.iter().map(|&i| t[i]).collect();
                let (loss, g) = self.loss_and_gradients(xb.view(), &tb);
                total += loss * chunk.len() as f64;
                self.adam_step(&g, &mut st, spec);
            }
            self.curve.push(total / n.max(1) as f64);
            after_epoch(e, self);
        }
    }

    pub fn fit(x: ArrayView2<f64>, y: &[bool], spec: &MlpSpec, seed: u64) -> Self {
        let t: Vec<f64> = y.iter().map(|&b| f64::from(u8::from(b))).collect();
        let mut m = Self::init(x.ncols(), &spec.hidden, seed);
        let mut rng = rng_for(seed, &["mlp", "shuffle"]);
        m.train_epochs(x, &t, spec, &mut rng, spec.epochs, |_, _| {});
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    #[test]
    fn gradients_match_central_differences() {
        let mut r = rng(5);
        let d = Normal::new(0.0, 1.0).unwrap();
        let x = Array2::from_shape_simple_fn((8, 3), || d.sample(&mut r));
        let t: Vec<f64> = (0..8).map(|i| (i % 2) as f64).collect();
        let mut m = Mlp::init(3, &MlpSpec::default().hidden, 17);
        for b in m.biases.iter_mut() {
            b.mapv_inplace(|_| 0.1 * d.sample(&mut r));
        }
        let (_, g) = m.loss_and_gradients(x.view(), &t);
        let h = 1e-6;
        for l in 0..m.weights.len() {
            let (rows, cols) = m.weights[l].dim();
            for k in 0..5 {
                let idx = ((k * 7919 + l) % rows, (k * 104729 + l) % cols);
                let orig = m.weights[l][idx];
                m.weights[l][idx] = orig + h;
                let up = m.loss(x.view(), &t);
                m.weights[l][idx] = orig - h;
                let down = m.loss(x.view(), &t);
                m.weights[l][idx] = orig;
                let numeric = (up - down) / (2.0 * h);
                let analytic = g.weights[l][idx];
                let scale = analytic.abs().max(numeric.abs()).max(1e-7);
                assert!((analytic - numeric).abs() / scale < 1e-4, "layer {l} {idx:?}: {analytic} vs {numeric}");
            }
        }
    }

    #[test]
    fn deterministic_from_seed() {
        let x = Array2::from_shape_fn((20, 2), |(i, j)| ((i * 3 + j) % 7) as f64);
        let y: Vec<bool> = (0..20).map(|i| i % 3 == 0).collect();
        let spec = MlpSpec {
            epochs: 2,
            ..MlpSpec::default()
        };
        assert_eq!(Mlp::fit(x.view(), &y, &spec, 1), Mlp::fit(x.view(), &y, &spec, 1));
    }
}
