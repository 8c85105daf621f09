use crate::error::{Error, Result};
use crate::metrics::MemoryModel;

/// How a [`FeatureMatrix`] stores its values, which also fixes its byte cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Storage {
    SparseCount,
    SparseReal,
    DenseReal,
}

impl Storage {
    pub fn is_sparse(self) -> bool {
        !matches!(self, Storage::DenseReal)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Values {
    // CSR layout
    Sparse {
        indptr: Vec<usize>,
        indices: Vec<u32>,
        values: Vec<f64>,
    },
    // row-major
    Dense(Vec<f64>),
}

/// Labeled samples, one row per document.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_features: usize,
    n_classes: usize,
    storage: Storage,
    values: Values,
    labels: Vec<usize>,
}

/// Borrowed view of one row.
#[derive(Debug, Clone, Copy)]
pub enum Row<'a> {
    Sparse {
        indices: &'a [u32],
        values: &'a [f64],
    },
    Dense(&'a [f64]),
}

impl<'a> Row<'a> {
    pub fn dot(&self, w: &[f64]) -> f64 {
        match *self {
            Row::Sparse { indices, values } => indices
                .iter()
                .zip(values)
                .map(|(&j, v)| v * w[j as usize])
                .sum(),
            Row::Dense(x) => x.iter().zip(w).map(|(a, b)| a * b).sum(),
        }
    }

    /// `w += alpha * self`
    pub fn axpy(&self, alpha: f64, w: &mut [f64]) {
        match *self {
            Row::Sparse { indices, values } => {
                for (&j, v) in indices.iter().zip(values) {
                    w[j as usize] += alpha * v;
                }
            }
            Row::Dense(x) => {
                for (wi, xi) in w.iter_mut().zip(x) {
                    *wi += alpha * xi;
                }
            }
        }
    }

    pub fn dot_row(&self, other: &Row<'_>) -> f64 {
        match (*self, *other) {
            (Row::Dense(a), b) | (b, Row::Dense(a)) => b.dot(a),
            (
                Row::Sparse {
                    indices: ia,
                    values: va,
                },
                Row::Sparse {
                    indices: ib,
                    values: vb,
                },
            ) => {
                let (mut p, mut q, mut acc) = (0, 0, 0.0);
                while p < ia.len() && q < ib.len() {
                    match ia[p].cmp(&ib[q]) {
                        std::cmp::Ordering::Less => p += 1,
                        std::cmp::Ordering::Greater => q += 1,
                        std::cmp::Ordering::Equal => {
                            acc += va[p] * vb[q];
                            p += 1;
                            q += 1;
                        }
                    }
                }
                acc
            }
        }
    }

    pub fn sq_norm(&self) -> f64 {
        match *self {
            Row::Sparse { values, .. } => values.iter().map(|v| v * v).sum(),
            Row::Dense(x) => x.iter().map(|v| v * v).sum(),
        }
    }

    /// Visits `(column, value)` for every stored entry (all columns for dense rows).
    pub fn for_each(&self, mut f: impl FnMut(usize, f64)) {
        match *self {
            Row::Sparse { indices, values } => {
                for (&j, &v) in indices.iter().zip(values) {
                    f(j as usize, v)
                }
            }
            Row::Dense(x) => x.iter().enumerate().for_each(|(j, &v)| f(j, v)),
        }
    }

    pub fn to_dense(&self, n_features: usize) -> Vec<f64> {
        let mut out = vec![0.0; n_features];
        self.for_each(|j, v| out[j] = v);
        out
    }
}

fn check_labels(labels: &[usize], n_classes: usize) -> Result<()> {
    if let Some(&bad) = labels.iter().find(|&&l| l >= n_classes) {
        return Err(Error::invalid(format!(
            "label {bad} out of range for {n_classes} classes"
        )));
    }
    Ok(())
}

impl FeatureMatrix {
    /// Dense matrix from row-major `values` of shape `labels.len() × n_features`.
    pub fn dense(
        n_features: usize,
        values: Vec<f64>,
        labels: Vec<usize>,
        n_classes: usize,
    ) -> Result<Self> {
        if values.len() != labels.len() * n_features {
            return Err(Error::invalid(format!(
                "{} values do not fill {} rows of {n_features} features",
                values.len(),
                labels.len()
            )));
        }
        check_labels(&labels, n_classes)?;
        Ok(FeatureMatrix {
            n_features,
            n_classes,
            storage: Storage::DenseReal,
            values: Values::Dense(values),
            labels,
        })
    }

    pub fn from_dense_rows(
        n_features: usize,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        n_classes: usize,
    ) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != n_features) {
            return Err(Error::DimensionMismatch {
                expected: n_features,
                actual: r.len(),
            });
        }
        Self::dense(n_features, rows.concat(), labels, n_classes)
    }

    /// Sparse matrix; entries per row may arrive unsorted, zeros are dropped.
    pub fn sparse(
        n_features: usize,
        rows: Vec<Vec<(u32, f64)>>,
        labels: Vec<usize>,
        n_classes: usize,
        storage: Storage,
    ) -> Result<Self> {
        if !storage.is_sparse() {
            return Err(Error::invalid("sparse constructor needs a sparse storage kind"));
        }
        if rows.len() != labels.len() {
            return Err(Error::invalid("row count differs from label count"));
        }
        check_labels(&labels, n_classes)?;
        let mut indptr = Vec::with_capacity(rows.len() + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for mut row in rows {
            row.sort_by_key(|&(j, _)| j);
            for (j, v) in row {
                if j as usize >= n_features {
                    return Err(Error::invalid(format!(
                        "column {j} out of range for {n_features} features"
                    )));
                }
                if v != 0.0 {
                    indices.push(j);
                    values.push(v);
                }
            }
            indptr.push(indices.len());
        }
        Ok(FeatureMatrix {
            n_features,
            n_classes,
            storage,
            values: Values::Sparse {
                indptr,
                indices,
                values,
            },
            labels,
        })
    }

    pub fn n_samples(&self) -> usize {
        self.labels.len()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn n_classes(&self) -> usize {
        self.n_classes
    }

    pub fn storage(&self) -> Storage {
        self.storage
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn row(&self, i: usize) -> Row<'_> {
        match &self.values {
            Values::Sparse {
                indptr,
                indices,
                values,
            } => {
                let (a, b) = (indptr[i], indptr[i + 1]);
                Row::Sparse {
                    indices: &indices[a..b],
                    values: &values[a..b],
                }
            }
            Values::Dense(v) => Row::Dense(&v[i * self.n_features..(i + 1) * self.n_features]),
        }
    }

    pub fn rows(&self) -> impl Iterator<Item = Row<'_>> {
        (0..self.n_samples()).map(move |i| self.row(i))
    }

    /// Stored entries: nonzeros for sparse storage, every cell for dense.
    pub fn stored_entries(&self) -> usize {
        match &self.values {
            Values::Sparse { indices, .. } => indices.len(),
            Values::Dense(v) => v.len(),
        }
    }

    pub fn feature_bytes(&self) -> u64 {
        MemoryModel::feature_bytes(self.storage, self.stored_entries())
    }

    pub fn all_finite(&self) -> bool {
        match &self.values {
            Values::Sparse { values, .. } => values.iter().all(|v| v.is_finite()),
            Values::Dense(v) => v.iter().all(|v| v.is_finite()),
        }
    }

    /// Same rows in dense row-major storage.
    pub fn to_dense(&self) -> FeatureMatrix {
        let values = self
            .rows()
            .flat_map(|r| r.to_dense(self.n_features))
            .collect();
        FeatureMatrix {
            n_features: self.n_features,
            n_classes: self.n_classes,
            storage: Storage::DenseReal,
            values: Values::Dense(values),
            labels: self.labels.clone(),
        }
    }

    /// Copy with each row scaled to unit ℓ2 norm (zero rows unchanged).
    pub fn l2_normalized(&self) -> FeatureMatrix {
        let mut out = self.clone();
        let n = self.n_samples();
        match &mut out.values {
            Values::Sparse { indptr, values, .. } => {
                for i in 0..n {
                    let r = &mut values[indptr[i]..indptr[i + 1]];
                    scale_unit(r);
                }
            }
            Values::Dense(v) => {
                let d = self.n_features;
                if d > 0 {
                    v.chunks_mut(d).for_each(scale_unit);
                }
            }
        }
        if out.storage == Storage::SparseCount {
            out.storage = Storage::SparseReal;
        }
        out
    }
}

fn scale_unit(r: &mut [f64]) {
    let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        r.iter_mut().for_each(|x| *x /= norm);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> FeatureMatrix {
        FeatureMatrix::sparse(
            4,
            vec![vec![(3, 2.0), (0, 1.0)], vec![], vec![(1, 0.0), (2, 5.0)]],
            vec![0, 1, 1],
            2,
            Storage::SparseCount,
        )
        .unwrap()
    }

    #[test]
    fn sparse_rows_sorted_without_zeros() {
        let m = sample();
        assert_eq!(m.stored_entries(), 3);
        assert_eq!(m.row(0).to_dense(4), vec![1.0, 0.0, 0.0, 2.0]);
        assert_eq!(m.row(1).sq_norm(), 0.0);
        assert_eq!(m.feature_bytes(), 3 * 16);
    }

    #[test]
    fn dense_conversion_preserves_products() {
        let m = sample();
        let d = m.to_dense();
        assert_eq!(d.feature_bytes(), 3 * 4 * 8);
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(m.row(i).dot_row(&m.row(j)), d.row(i).dot_row(&d.row(j)));
                assert_eq!(m.row(i).dot_row(&d.row(j)), d.row(i).dot_row(&m.row(j)));
            }
        }
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(FeatureMatrix::dense(3, vec![0.0; 5], vec![0, 0], 1).is_err());
        assert!(FeatureMatrix::dense(1, vec![0.0], vec![2], 2).is_err());
        assert!(FeatureMatrix::sparse(2, vec![vec![(2, 1.0)]], vec![0], 1, Storage::SparseReal).is_err());
        assert!(FeatureMatrix::sparse(2, vec![], vec![], 1, Storage::DenseReal).is_err());
    }

    #[test]
    fn normalization_leaves_zero_rows() {
        let m = sample().l2_normalized();
        assert!((m.row(0).sq_norm() - 1.0).abs() < 1e-12);
        assert_eq!(m.row(1).sq_norm(), 0.0);
        assert_eq!(m.storage(), Storage::SparseReal);
    }
}
