//! One-vs-rest linear models: ridge (closed form), PA-I and SGD with hinge loss.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use super::TrainConfig;
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded};
use crate::text::{FeatureMatrix, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearKind {
    Ridge,
    PassiveAggressive,
    Sgd,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    kind: LinearKind,
    n_features: usize,
    // class-major k × d
    weights: Vec<f64>,
    bias: Vec<f64>,
}

fn targets(x: &FeatureMatrix, class: usize) -> Vec<f64> {
    x.labels()
        .iter()
        .map(|&l| if l == class { 1.0 } else { -1.0 })
        .collect()
}

fn solve_spd(mut a: DMatrix<f64>, b: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if let Some(ch) = a.clone().cholesky() {
        return Ok(ch.solve(b));
    }
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)] += 1e-8;
    }
    a.cholesky()
        .map(|ch| ch.solve(b))
        .ok_or_else(|| Error::invalid("ridge system is not positive definite"))
}

/// Solves `(XᵀX + αI) W = XᵀY` for row-major `x` (n × d) and `y` (n × k),
/// through the n × n kernel system when `d > n`. Returns `W` row-major d × k.
pub fn ridge_solve(x: &[f64], n: usize, d: usize, y: &[f64], k: usize, alpha: f64) -> Result<Vec<f64>> {
    if x.len() != n * d || y.len() != n * k {
        return Err(Error::invalid("ridge_solve shape mismatch"));
    }
    if alpha <= 0.0 {
        return Err(Error::invalid("ridge alpha must be positive"));
    }
    let xm = DMatrix::from_row_slice(n, d, x);
    let ym = DMatrix::from_row_slice(n, k, y);
    let w = if d <= n {
        let g = xm.transpose() * &xm + DMatrix::identity(d, d) * alpha;
        solve_spd(g, &(xm.transpose() * &ym))?
    } else {
        let kern = &xm * xm.transpose() + DMatrix::identity(n, n) * alpha;
        xm.transpose() * solve_spd(kern, &ym)?
    };
    Ok((0..d).flat_map(|i| (0..k).map(move |c| (i, c))).map(|(i, c)| w[(i, c)]).collect())
}

impl LinearModel {
    pub(crate) fn from_parts(kind: LinearKind, n_features: usize, weights: Vec<f64>, bias: Vec<f64>) -> Self {
        LinearModel {
            kind,
            n_features,
            weights,
            bias,
        }
    }

    /// Ridge with intercept: solved on mean-centred features and ±1 targets.
    pub fn fit_ridge(x: &FeatureMatrix, alpha: f64) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(Error::invalid("ridge alpha must be positive"));
        }
        let (n, d, k) = (x.n_samples(), x.n_features(), x.n_classes());
        let mut mean = vec![0.0; d];
        x.rows().for_each(|r| r.axpy(1.0 / n as f64, &mut mean));
        let y: Vec<Vec<f64>> = (0..k).map(|c| targets(x, c)).collect();
        let y_mean: Vec<f64> = y.iter().map(|t| t.iter().sum::<f64>() / n as f64).collect();
        let yc = DMatrix::from_fn(n, k, |i, c| y[c][i] - y_mean[c]);

        let mut weights = vec![0.0; k * d];
        if d <= n {
            let mut g = DMatrix::<f64>::zeros(d, d);
            let mut b = DMatrix::<f64>::zeros(d, k);
            for (i, row) in x.rows().enumerate() {
                let mut xc = row.to_dense(d);
                xc.iter_mut().zip(&mean).for_each(|(v, m)| *v -= m);
                for p in 0..d {
                    if xc[p] == 0.0 {
                        continue;
                    }
                    for q in 0..d {
                        g[(p, q)] += xc[p] * xc[q];
                    }
                    for c in 0..k {
                        b[(p, c)] += xc[p] * yc[(i, c)];
                    }
                }
            }
            for p in 0..d {
                g[(p, p)] += alpha;
            }
            let w = solve_spd(g, &b)?;
            for c in 0..k {
                for p in 0..d {
                    weights[c * d + p] = w[(p, c)];
                }
            }
        } else {
            let rows: Vec<Row<'_>> = x.rows().collect();
            let proj: Vec<f64> = rows.iter().map(|r| r.dot(&mean)).collect();
            let mm: f64 = mean.iter().map(|v| v * v).sum();
            let mut kern = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                for j in 0..=i {
                    let v = rows[i].dot_row(&rows[j]) - proj[i] - proj[j] + mm;
                    kern[(i, j)] = v;
                    kern[(j, i)] = v;
                }
                kern[(i, i)] += alpha;
            }
            let a = solve_spd(kern, &yc)?;
            for c in 0..k {
                let w = &mut weights[c * d..(c + 1) * d];
                let mut total = 0.0;
                for (i, row) in rows.iter().enumerate() {
                    row.axpy(a[(i, c)], w);
                    total += a[(i, c)];
                }
                w.iter_mut().zip(&mean).for_each(|(wv, m)| *wv -= total * m);
            }
        }
        let bias = (0..k)
            .map(|c| {
                let w = &weights[c * d..(c + 1) * d];
                y_mean[c] - w.iter().zip(&mean).map(|(a, b)| a * b).sum::<f64>()
            })
            .collect();
        Ok(Self::from_parts(LinearKind::Ridge, d, weights, bias))
    }

    /// PA-I with hinge loss, one binary problem per class. The intercept is
    /// treated as a weight on a constant feature of value 1.
    pub fn fit_passive_aggressive(x: &FeatureMatrix, cfg: &TrainConfig) -> Self {
        let (d, k) = (x.n_features(), x.n_classes());
        let mut weights = vec![0.0; k * d];
        let mut bias = vec![0.0; k];
        let sq_norms: Vec<f64> = x.rows().map(|r| r.sq_norm() + 1.0).collect();
        for c in 0..k {
            let y = targets(x, c);
            let w = &mut weights[c * d..(c + 1) * d];
            let b = &mut bias[c];
            run_epochs(x.n_samples(), cfg, c, |i| {
                let row = x.row(i);
                let loss = (1.0 - y[i] * (row.dot(w) + *b)).max(0.0);
                if loss > 0.0 {
                    let tau = cfg.pa_c.min(loss / sq_norms[i]);
                    row.axpy(tau * y[i], w);
                    *b += tau * y[i];
                }
                loss
            });
        }
        Self::from_parts(LinearKind::PassiveAggressive, d, weights, bias)
    }

    /// Linear SVM by stochastic subgradient descent on the L2-regularized
    /// hinge loss, step size `1 / (λ (t + t0))`.
    pub fn fit_sgd(x: &FeatureMatrix, cfg: &TrainConfig) -> Self {
        let (d, k) = (x.n_features(), x.n_classes());
        let lambda = cfg.sgd_lambda;
        // initial step from a typical weight magnitude of 1/sqrt(sqrt(λ))
        let typw = (1.0 / lambda.sqrt()).sqrt();
        let t0 = 1.0 / (lambda * typw);
        let mut weights = vec![0.0; k * d];
        let mut bias = vec![0.0; k];
        for c in 0..k {
            let y = targets(x, c);
            // w = scale * v keeps the decay step O(1)
            let mut v = vec![0.0; d];
            let mut scale = 1.0;
            let mut b = 0.0;
            let mut t = 1.0f64;
            run_epochs(x.n_samples(), cfg, c, |i| {
                let row = x.row(i);
                let eta = 1.0 / (lambda * (t0 + t));
                let margin = y[i] * (scale * row.dot(&v) + b);
                scale *= 1.0 - eta * lambda;
                if margin < 1.0 {
                    row.axpy(eta * y[i] / scale, &mut v);
                    b += eta * y[i];
                }
                if scale < 1e-9 {
                    v.iter_mut().for_each(|x| *x *= scale);
                    scale = 1.0;
                }
                t += 1.0;
                (1.0 - margin).max(0.0)
            });
            weights[c * d..(c + 1) * d]
                .iter_mut()
                .zip(&v)
                .for_each(|(w, vv)| *w = vv * scale);
            bias[c] = b;
        }
        Self::from_parts(LinearKind::Sgd, d, weights, bias)
    }

    pub fn kind(&self) -> LinearKind {
        self.kind
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.bias.len()
    }

    pub fn weights(&self, class: usize) -> &[f64] {
        &self.weights[class * self.n_features..(class + 1) * self.n_features]
    }

    pub(crate) fn all_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> &[f64] {
        &self.bias
    }

    /// Weights plus one intercept per class.
    pub fn parameter_count(&self) -> usize {
        self.weights.len() + self.bias.len()
    }

    pub fn scores(&self, row: Row<'_>) -> Vec<f64> {
        (0..self.n_classes())
            .map(|c| row.dot(self.weights(c)) + self.bias[c])
            .collect()
    }
}

/// Shuffled passes over the samples until the summed epoch loss stops
/// improving by `tol * n` for `patience` epochs, or `max_iter` is reached.
fn run_epochs(n: usize, cfg: &TrainConfig, class: usize, mut step: impl FnMut(usize) -> f64) {
    let mut rng = seeded(derive_seed(cfg.seed, class as u64));
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = f64::INFINITY;
    let mut stale = 0;
    for _ in 0..cfg.linear_max_iter {
        order.shuffle(&mut rng);
        let total: f64 = order.iter().map(|&i| step(i)).sum();
        if total > best - cfg.linear_tol * n as f64 {
            stale += 1;
        } else {
            stale = 0;
        }
        best = best.min(total);
        if stale >= cfg.linear_patience {
            break;
        }
    }
}
