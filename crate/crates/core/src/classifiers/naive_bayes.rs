use crate::text::{FeatureMatrix, Row};

/// Bernoulli naive Bayes on presence features (`x > 0`) with Laplace smoothing.
///
/// Stores per class the log-odds `ln p - ln(1 - p)` of each feature being
/// present plus one offset `ln prior + Σ ln(1 - p)`, so scoring a row only
/// touches its present features.
#[derive(Debug, Clone, PartialEq)]
pub struct BernoulliNb {
    n_features: usize,
    log_odds: Vec<f64>,
    offset: Vec<f64>,
}

impl BernoulliNb {
    pub fn fit(x: &FeatureMatrix, alpha: f64) -> Self {
        let (d, k, n) = (x.n_features(), x.n_classes(), x.n_samples());
        let mut present = vec![0.0; k * d];
        let mut class_count = vec![0.0; k];
        for (row, &y) in x.rows().zip(x.labels()) {
            class_count[y] += 1.0;
            let slot = &mut present[y * d..(y + 1) * d];
            row.for_each(|j, v| {
                if v > 0.0 {
                    slot[j] += 1.0;
                }
            });
        }
        let mut log_odds = vec![0.0; k * d];
        let mut offset = vec![f64::NEG_INFINITY; k];
        for c in 0..k {
            if class_count[c] == 0.0 {
                continue;
            }
            let denom = class_count[c] + 2.0 * alpha;
            let mut acc = (class_count[c] / n as f64).ln();
            for j in 0..d {
                let p = (present[c * d + j] + alpha) / denom;
                log_odds[c * d + j] = p.ln() - (1.0 - p).ln();
                acc += (1.0 - p).ln();
            }
            offset[c] = acc;
        }
        BernoulliNb {
            n_features: d,
            log_odds,
            offset,
        }
    }

    pub(crate) fn from_parts(n_features: usize, log_odds: Vec<f64>, offset: Vec<f64>) -> Self {
        BernoulliNb {
            n_features,
            log_odds,
            offset,
        }
    }

    pub(crate) fn tables(&self) -> (&[f64], &[f64]) {
        (&self.log_odds, &self.offset)
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.offset.len()
    }

    pub fn parameter_count(&self) -> usize {
        self.log_odds.len() + self.offset.len()
    }

    /// Unnormalized `ln P(class) + ln P(x | class)` per class.
    pub fn joint_log_likelihood(&self, row: Row<'_>) -> Vec<f64> {
        let d = self.n_features;
        let mut out = self.offset.clone();
        row.for_each(|j, v| {
            if v > 0.0 {
                for (c, o) in out.iter_mut().enumerate() {
                    *o += self.log_odds[c * d + j];
                }
            }
        });
        out
    }

    /// Normalized log posteriors.
    pub fn log_posteriors(&self, row: Row<'_>) -> Vec<f64> {
        let jll = self.joint_log_likelihood(row);
        let max = jll.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lse = max + jll.iter().map(|v| (v - max).exp()).sum::<f64>().ln();
        jll.iter().map(|v| v - lse).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn posteriors_match_hand_computation() {
        // class 0: [1,0], [1,1]; class 1: [0,1]
        let x = FeatureMatrix::from_dense_rows(
            2,
            vec![vec![1.0, 0.0], vec![3.0, 2.0], vec![0.0, 1.0]],
            vec![0, 0, 1],
            2,
        )
        .unwrap();
        let m = BernoulliNb::fit(&x, 1.0);
        assert_eq!(m.parameter_count(), 2 * 2 + 2);

        // smoothed presence probabilities
        let p0 = [(2.0 + 1.0) / (2.0 + 2.0), (1.0 + 1.0) / (2.0 + 2.0)];
        let p1 = [(0.0 + 1.0) / (1.0 + 2.0), (1.0 + 1.0) / (1.0 + 2.0)];
        // probe [present, absent]
        let j0: f64 = 2.0 / 3.0 * p0[0] * (1.0 - p0[1]);
        let j1: f64 = 1.0 / 3.0 * p1[0] * (1.0 - p1[1]);
        let post0 = j0 / (j0 + j1);

        let probe = FeatureMatrix::from_dense_rows(2, vec![vec![5.0, 0.0]], vec![0], 2).unwrap();
        let lp = m.log_posteriors(probe.row(0));
        assert!((lp[0].exp() - post0).abs() < 1e-12);
        assert!((lp[1].exp() - (1.0 - post0)).abs() < 1e-12);
    }

    #[test]
    fn empty_class_has_zero_posterior() {
        let x = FeatureMatrix::from_dense_rows(1, vec![vec![1.0], vec![0.0]], vec![0, 1], 3).unwrap();
        let m = BernoulliNb::fit(&x, 1.0);
        let lp = m.log_posteriors(x.row(0));
        assert_eq!(lp[2], f64::NEG_INFINITY);
    }
}
