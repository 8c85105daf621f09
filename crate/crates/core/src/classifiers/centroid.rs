use super::argmax;
use crate::text::{FeatureMatrix, Row};

/// Per-class mean vectors; prediction picks the closest mean in Euclidean
/// distance. Classes without training samples hold NaN and are never chosen.
#[derive(Debug, Clone, PartialEq)]
pub struct NearestCentroid {
    n_features: usize,
    centroids: Vec<f64>,
}

impl NearestCentroid {
    pub fn fit(x: &FeatureMatrix) -> Self {
        let (d, k) = (x.n_features(), x.n_classes());
        let mut centroids = vec![0.0; k * d];
        let mut counts = vec![0usize; k];
        for (row, &y) in x.rows().zip(x.labels()) {
            row.axpy(1.0, &mut centroids[y * d..(y + 1) * d]);
            counts[y] += 1;
        }
        for (c, &n) in counts.iter().enumerate() {
            let slot = &mut centroids[c * d..(c + 1) * d];
            if n == 0 {
                slot.fill(f64::NAN);
            } else {
                slot.iter_mut().for_each(|v| *v /= n as f64);
            }
        }
        NearestCentroid {
            n_features: d,
            centroids,
        }
    }

    pub(crate) fn from_parts(n_features: usize, centroids: Vec<f64>) -> Self {
        NearestCentroid {
            n_features,
            centroids,
        }
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        if self.n_features == 0 {
            0
        } else {
            self.centroids.len() / self.n_features
        }
    }

    pub fn centroid(&self, class: usize) -> &[f64] {
        &self.centroids[class * self.n_features..(class + 1) * self.n_features]
    }

    pub(crate) fn centroids(&self) -> &[f64] {
        &self.centroids
    }

    pub fn parameter_count(&self) -> usize {
        self.centroids.len()
    }

    pub fn predict_row(&self, row: Row<'_>) -> usize {
        // argmin |x - c|² == argmax 2 x·c - |c|²
        let scores: Vec<f64> = (0..self.n_classes())
            .map(|c| {
                let cen = self.centroid(c);
                let sq: f64 = cen.iter().map(|v| v * v).sum();
                2.0 * row.dot(cen) - sq
            })
            .collect();
        argmax(&scores)
    }
}
