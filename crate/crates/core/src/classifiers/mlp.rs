//! Fully connected ReLU network with a softmax output, trained by mini-batch
//! Adam on the cross-entropy loss.
//!
//! All weights and biases live in one flat vector: for each layer, the
//! `fan_in × fan_out` weight matrix (row-major) followed by its bias.

use std::ops::Range;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{argmax, TrainConfig};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};
use crate::text::{FeatureMatrix, Row};

const ADAM_BETA1: f64 = 0.9;
const ADAM_BETA2: f64 = 0.999;
const ADAM_EPS: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    params: Vec<f64>,
}

struct Layer {
    fan_out: usize,
    w: usize,
    b: usize,
}

impl Mlp {
    /// Network with the given layer widths (input first, classes last),
    /// initialized uniformly in `±sqrt(6 / (fan_in + fan_out))`.
    pub fn new(sizes: Vec<usize>, seed: u64) -> Result<Self> {
        if sizes.len() < 2 || sizes.iter().any(|&s| s == 0) {
            return Err(Error::invalid(format!("bad MLP layer sizes {sizes:?}")));
        }
        let total = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        let mut params = Vec::with_capacity(total);
        let mut rng = seeded(derive_seed(seed, 0x4d4c50));
        for w in sizes.windows(2) {
            let bound = (6.0 / (w[0] + w[1]) as f64).sqrt();
            params.extend((0..w[0] * w[1] + w[1]).map(|_| rng.random_range(-bound..bound)));
        }
        Ok(Mlp { sizes, params })
    }

    pub(crate) fn from_parts(sizes: Vec<usize>, params: Vec<f64>) -> Result<Self> {
        let expected: usize = sizes.windows(2).map(|w| w[0] * w[1] + w[1]).sum();
        if sizes.len() < 2 || params.len() != expected {
            return Err(Error::invalid("MLP parameters do not match layer sizes"));
        }
        Ok(Mlp { sizes, params })
    }

    pub fn fit(x: &FeatureMatrix, cfg: &TrainConfig) -> Result<Self> {
        let sizes: Vec<usize> = std::iter::once(x.n_features())
            .chain(cfg.mlp_hidden.iter().copied())
            .chain(std::iter::once(x.n_classes()))
            .collect();
        let mut net = Mlp::new(sizes, cfg.seed)?;
        net.train(x, cfg);
        Ok(net)
    }

    fn layers(&self) -> Vec<Layer> {
        let mut off = 0;
        self.sizes
            .windows(2)
            .map(|w| {
                let l = Layer {
                    fan_out: w[1],
                    w: off,
                    b: off + w[0] * w[1],
                };
                off += w[0] * w[1] + w[1];
                l
            })
            .collect()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut [f64] {
        &mut self.params
    }

    /// Flat-vector ranges of each tensor: weights then bias, layer by layer.
    pub fn tensor_ranges(&self) -> Vec<Range<usize>> {
        self.layers()
            .iter()
            .flat_map(|l| [l.w..l.b, l.b..l.b + l.fan_out])
            .collect()
    }

    pub fn n_features(&self) -> usize {
        self.sizes[0]
    }

    pub fn n_classes(&self) -> usize {
        *self.sizes.last().expect("at least two layers")
    }

    pub fn parameter_count(&self) -> usize {
        self.params.len()
    }

    /// Post-activation outputs of every layer; the last entry is the softmax.
    fn forward(&self, row: Row<'_>, layers: &[Layer]) -> Vec<Vec<f64>> {
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(layers.len());
        for (li, l) in layers.iter().enumerate() {
            let mut z = self.params[l.b..l.b + l.fan_out].to_vec();
            let w = &self.params[l.w..l.b];
            let mut add = |i: usize, v: f64| {
                for (zo, wo) in z.iter_mut().zip(&w[i * l.fan_out..(i + 1) * l.fan_out]) {
                    *zo += v * wo;
                }
            };
            if li == 0 {
                row.for_each(&mut add);
            } else {
                for (i, &v) in acts[li - 1].iter().enumerate() {
                    if v != 0.0 {
                        add(i, v);
                    }
                }
            }
            if li + 1 < layers.len() {
                z.iter_mut().for_each(|v| *v = v.max(0.0));
            } else {
                let max = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                z.iter_mut().for_each(|v| *v = (*v - max).exp());
                let s: f64 = z.iter().sum();
                z.iter_mut().for_each(|v| *v /= s);
            }
            acts.push(z);
        }
        acts
    }

    pub fn predict_proba(&self, row: Row<'_>) -> Vec<f64> {
        self.forward(row, &self.layers()).pop().expect("output layer")
    }

    pub fn predict_row(&self, row: Row<'_>) -> usize {
        argmax(&self.predict_proba(row))
    }

    /// Mean cross-entropy over `batch` and its gradient, written into `grad`.
    pub fn loss_and_gradient(&self, x: &FeatureMatrix, batch: &[usize], grad: &mut [f64]) -> f64 {
        let layers = self.layers();
        grad.fill(0.0);
        let mut loss = 0.0;
        for &i in batch {
            let row = x.row(i);
            let y = x.labels()[i];
            let acts = self.forward(row, &layers);
            let out = acts.last().expect("output layer");
            loss -= out[y].max(f64::MIN_POSITIVE).ln();
            let mut delta = out.clone();
            delta[y] -= 1.0;
            for li in (0..layers.len()).rev() {
                let l = &layers[li];
                for (g, d) in grad[l.b..l.b + l.fan_out].iter_mut().zip(&delta) {
                    *g += d;
                }
                {
                    let gw = &mut grad[l.w..l.b];
                    let mut outer = |j: usize, v: f64| {
                        for (g, d) in gw[j * l.fan_out..(j + 1) * l.fan_out].iter_mut().zip(&delta) {
                            *g += v * d;
                        }
                    };
                    if li == 0 {
                        row.for_each(&mut outer);
                    } else {
                        for (j, &v) in acts[li - 1].iter().enumerate() {
                            if v != 0.0 {
                                outer(j, v);
                            }
                        }
                    }
                }
                if li > 0 {
                    let w = &self.params[l.w..l.b];
                    delta = acts[li - 1]
                        .iter()
                        .enumerate()
                        .map(|(j, &a)| {
                            if a > 0.0 {
                                w[j * l.fan_out..(j + 1) * l.fan_out]
                                    .iter()
                                    .zip(&delta)
                                    .map(|(wv, d)| wv * d)
                                    .sum()
                            } else {
                                0.0
                            }
                        })
                        .collect();
                }
            }
        }
        let scale = 1.0 / batch.len() as f64;
        grad.iter_mut().for_each(|g| *g *= scale);
        loss * scale
    }

    fn train(&mut self, x: &FeatureMatrix, cfg: &TrainConfig) {
        let n = x.n_samples();
        let batch = cfg.mlp_batch_size.clamp(1, n);
        let mut rng = seeded(derive_seed(cfg.seed, 0x5348_5546));
        let mut order: Vec<usize> = (0..n).collect();
        let mut grad = vec![0.0; self.params.len()];
        let mut m = vec![0.0; self.params.len()];
        let mut v = vec![0.0; self.params.len()];
        let mut step = 0i32;
        let mut best = f64::INFINITY;
        let mut stale = 0;
        for _ in 0..cfg.mlp_max_epochs {
            order.shuffle(&mut rng);
            let mut epoch_loss = 0.0;
            for chunk in order.chunks(batch) {
                epoch_loss += self.loss_and_gradient(x, chunk, &mut grad) * chunk.len() as f64;
                step += 1;
                let lr = cfg.mlp_learning_rate * (1.0 - ADAM_BETA2.powi(step)).sqrt()
                    / (1.0 - ADAM_BETA1.powi(step));
                for (((p, g), mi), vi) in self.params.iter_mut().zip(&grad).zip(&mut m).zip(&mut v) {
                    *mi = ADAM_BETA1 * *mi + (1.0 - ADAM_BETA1) * g;
                    *vi = ADAM_BETA2 * *vi + (1.0 - ADAM_BETA2) * g * g;
                    *p -= lr * *mi / (vi.sqrt() + ADAM_EPS);
                }
            }
            epoch_loss /= n as f64;
            if epoch_loss > best - cfg.mlp_tol {
                stale += 1;
            } else {
                stale = 0;
            }
            best = best.min(epoch_loss);
            if stale >= cfg.mlp_patience {
                break;
            }
        }
    }
}
