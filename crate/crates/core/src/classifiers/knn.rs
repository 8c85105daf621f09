use super::argmax;
use crate::error::{Error, Result};
use crate::text::{FeatureMatrix, Row};

/// k-nearest neighbours under cosine similarity with majority vote.
#[derive(Debug, Clone, PartialEq)]
pub struct Knn {
    k: usize,
    samples: FeatureMatrix,
    norms: Vec<f64>,
}

impl Knn {
    pub fn fit(x: &FeatureMatrix, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::invalid("kNN needs k >= 1"));
        }
        Ok(Self::from_samples(x.clone(), k))
    }

    pub(crate) fn from_samples(samples: FeatureMatrix, k: usize) -> Self {
        let norms = samples.rows().map(|r| r.sq_norm().sqrt()).collect();
        Knn { k, samples, norms }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub(crate) fn samples(&self) -> &FeatureMatrix {
        &self.samples
    }

    pub fn n_features(&self) -> usize {
        self.samples.n_features()
    }

    pub fn n_classes(&self) -> usize {
        self.samples.n_classes()
    }

    /// Stored samples times dimensionality plus one label per sample.
    pub fn parameter_count(&self) -> usize {
        self.samples.n_samples() * (self.samples.n_features() + 1)
    }

    pub fn predict_row(&self, row: Row<'_>) -> usize {
        let norm = row.sq_norm().sqrt();
        let mut sims: Vec<(f64, usize)> = self
            .samples
            .rows()
            .zip(&self.norms)
            .enumerate()
            .map(|(i, (s, &sn))| {
                let denom = norm * sn;
                let sim = if denom > 0.0 { row.dot_row(&s) / denom } else { 0.0 };
                (sim, i)
            })
            .collect();
        // highest similarity first, earlier training sample on ties
        sims.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut votes = vec![0.0; self.n_classes()];
        let labels = self.samples.labels();
        for &(_, i) in sims.iter().take(self.k) {
            votes[labels[i]] += 1.0;
        }
        argmax(&votes)
    }
}
