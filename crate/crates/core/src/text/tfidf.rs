use std::collections::{BTreeMap, BTreeSet};

use super::{FeatureMatrix, Storage};
use crate::error::Result;

/// Word-level vocabulary and smoothed inverse document frequencies fitted on
/// the training split: `idf(w) = ln((1 + N) / (1 + df(w))) + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WordVocabulary {
    columns: BTreeMap<String, u32>,
    idf: Vec<f64>,
}

impl WordVocabulary {
    pub fn fit<S: AsRef<str>>(train_docs: &[Vec<S>]) -> Self {
        let mut df: BTreeMap<String, u64> = BTreeMap::new();
        for doc in train_docs {
            let unique: BTreeSet<&str> = doc.iter().map(|w| w.as_ref()).collect();
            for w in unique {
                *df.entry(w.to_string()).or_insert(0) += 1;
            }
        }
        let n = train_docs.len() as f64;
        let idf = df
            .values()
            .map(|&d| ((1.0 + n) / (1.0 + d as f64)).ln() + 1.0)
            .collect();
        let columns = df
            .into_keys()
            .enumerate()
            .map(|(i, w)| (w, i as u32))
            .collect();
        WordVocabulary { columns, idf }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn column(&self, word: &str) -> Option<u32> {
        self.columns.get(word).copied()
    }

    pub fn idf(&self, word: &str) -> Option<f64> {
        self.column(word).map(|j| self.idf[j as usize])
    }

    /// Raw in-vocabulary counts, sorted by column.
    pub fn term_counts<S: AsRef<str>>(&self, doc: &[S]) -> Vec<(u32, f64)> {
        let mut counts: BTreeMap<u32, f64> = BTreeMap::new();
        for w in doc {
            if let Some(j) = self.column(w.as_ref()) {
                *counts.entry(j).or_insert(0.0) += 1.0;
            }
        }
        counts.into_iter().collect()
    }

    /// ℓ2-normalized TF-IDF weights, sorted by column.
    pub fn tfidf_weights<S: AsRef<str>>(&self, doc: &[S]) -> Vec<(u32, f64)> {
        let mut row: Vec<(u32, f64)> = self
            .term_counts(doc)
            .into_iter()
            .map(|(j, tf)| (j, tf * self.idf[j as usize]))
            .collect();
        let norm = row.iter().map(|(_, v)| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            row.iter_mut().for_each(|(_, v)| *v /= norm);
        }
        row
    }
}

pub fn tf_features<S: AsRef<str>>(
    docs: &[Vec<S>],
    vocab: &WordVocabulary,
    labels: Vec<usize>,
    n_classes: usize,
) -> Result<FeatureMatrix> {
    let rows = docs.iter().map(|d| vocab.term_counts(d)).collect();
    FeatureMatrix::sparse(vocab.len(), rows, labels, n_classes, Storage::SparseCount)
}

pub fn tfidf_features<S: AsRef<str>>(
    docs: &[Vec<S>],
    vocab: &WordVocabulary,
    labels: Vec<usize>,
    n_classes: usize,
) -> Result<FeatureMatrix> {
    let rows = docs.iter().map(|d| vocab.tfidf_weights(d)).collect();
    FeatureMatrix::sparse(vocab.len(), rows, labels, n_classes, Storage::SparseReal)
}
