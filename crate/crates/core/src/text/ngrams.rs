use std::collections::BTreeMap;

use super::{Alphabet, FeatureMatrix, Storage};
use crate::error::{Error, Result};
use crate::hdc::{embed_stats_raw, HdVector, ItemMemory, NGram, NGramStats};
use crate::rng::derive_seed;

/// Inclusive range of n-gram orders, e.g. `2..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NGramRange {
    pub min: usize,
    pub max: usize,
}

impl NGramRange {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min == 0 || min > max {
            return Err(Error::invalid(format!("invalid n-gram range {min}-{max}")));
        }
        Ok(NGramRange { min, max })
    }

    pub fn single(n: usize) -> Result<Self> {
        Self::new(n, n)
    }

    pub fn orders(&self) -> impl Iterator<Item = usize> {
        self.min..=self.max
    }
}

impl std::fmt::Display for NGramRange {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.min, self.max)
    }
}

impl std::str::FromStr for NGramRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|_| Error::invalid(format!("bad n-gram range {s:?}")))
        };
        match s.split_once('-') {
            Some((a, b)) => Self::new(parse(a)?, parse(b)?),
            None => Self::single(parse(s)?),
        }
    }
}

/// Sliding-window statistics of one symbol sequence.
pub fn ngram_stats<S: AsRef<str>>(symbols: &[S], n: usize, alphabet: &Alphabet) -> Result<NGramStats> {
    NGramStats::from_symbols(&alphabet.encode(symbols), n, alphabet.len())
}

/// One document's statistics for every order in a range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocStats {
    per_order: Vec<NGramStats>,
}

impl DocStats {
    pub fn compute(ids: &[u32], range: NGramRange, alphabet_size: usize) -> Result<Self> {
        let per_order = range
            .orders()
            .map(|n| NGramStats::from_symbols(ids, n, alphabet_size))
            .collect::<Result<_>>()?;
        Ok(DocStats { per_order })
    }

    pub fn from_orders(per_order: Vec<NGramStats>) -> Self {
        DocStats { per_order }
    }

    pub fn orders(&self) -> &[NGramStats] {
        &self.per_order
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NGram, u64)> {
        self.per_order.iter().flat_map(|s| s.iter())
    }
}

/// Column index for every n-gram seen in the training documents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NGramVocabulary {
    columns: BTreeMap<NGram, u32>,
}

impl NGramVocabulary {
    pub fn fit(train: &[DocStats]) -> Self {
        let mut columns: BTreeMap<NGram, u32> = train
            .iter()
            .flat_map(|d| d.iter().map(|(g, _)| (g.clone(), 0)))
            .collect();
        for (i, v) in columns.values_mut().enumerate() {
            *v = i as u32;
        }
        NGramVocabulary { columns }
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn column(&self, gram: &[u32]) -> Option<u32> {
        self.columns.get(gram).copied()
    }
}

/// Count matrix over the training vocabulary; unseen n-grams are dropped.
pub fn stats_to_sparse_features(
    docs: &[DocStats],
    vocab: &NGramVocabulary,
    labels: Vec<usize>,
    n_classes: usize,
) -> Result<FeatureMatrix> {
    let rows = docs
        .iter()
        .map(|d| {
            d.iter()
                .filter_map(|(g, c)| vocab.column(g).map(|j| (j, c as f64)))
                .collect()
        })
        .collect();
    FeatureMatrix::sparse(vocab.len(), rows, labels, n_classes, Storage::SparseCount)
}

/// Per-order item memories whose contributions are bundled into one vector.
#[derive(Debug, Clone)]
pub struct HdEncoder {
    dim: usize,
    range: NGramRange,
    memories: Vec<ItemMemory>,
}

impl HdEncoder {
    pub fn new(dim: usize, alphabet_size: usize, range: NGramRange, seed: u64) -> Result<Self> {
        let memories = range
            .orders()
            .map(|n| ItemMemory::new(dim, alphabet_size, derive_seed(seed, n as u64)))
            .collect::<Result<_>>()?;
        Ok(HdEncoder {
            dim,
            range,
            memories,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn range(&self) -> NGramRange {
        self.range
    }

    pub fn memory(&self, n: usize) -> Option<&ItemMemory> {
        n.checked_sub(self.range.min)
            .and_then(|k| self.memories.get(k))
    }

    /// Unnormalized integer embedding of a document.
    pub fn embed_raw(&self, doc: &DocStats) -> Result<HdVector> {
        let mut acc = HdVector::zeros(self.dim);
        for stats in doc.orders() {
            if stats.is_empty() {
                continue;
            }
            let im = self.memory(stats.n()).ok_or_else(|| {
                Error::invalid(format!(
                    "order {} outside encoder range {}",
                    stats.n(),
                    self.range
                ))
            })?;
            acc.add_scaled(&embed_stats_raw(stats, im)?, 1)?;
        }
        Ok(acc)
    }
}

/// Dense matrix of ℓ2-normalized HD embeddings, one row per document.
pub fn embed_corpus(
    docs: &[DocStats],
    encoder: &HdEncoder,
    labels: Vec<usize>,
    n_classes: usize,
) -> Result<FeatureMatrix> {
    let mut values = Vec::with_capacity(docs.len() * encoder.dim());
    for doc in docs {
        values.extend(encoder.embed_raw(doc)?.to_embedding(true).into_inner());
    }
    FeatureMatrix::dense(encoder.dim(), values, labels, n_classes)
}
