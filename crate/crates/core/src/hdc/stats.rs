use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// An n-gram as a sequence of alphabet ids.
pub type NGram = Vec<u32>;

/// Sparse n-gram occurrence counts over an alphabet of `alphabet_size` symbols.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NGramStats {
    n: usize,
    alphabet_size: usize,
    counts: BTreeMap<NGram, u64>,
}

impl NGramStats {
    pub fn new(n: usize, alphabet_size: usize) -> Self {
        NGramStats {
            n,
            alphabet_size,
            counts: BTreeMap::new(),
        }
    }

    /// Counts every overlapping window of length `n` in `symbols`.
    pub fn from_symbols(symbols: &[u32], n: usize, alphabet_size: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n-gram order must be at least 1"));
        }
        let mut stats = NGramStats::new(n, alphabet_size);
        for w in symbols.windows(n) {
            stats.increment(w, 1)?;
        }
        Ok(stats)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn increment(&mut self, gram: &[u32], by: u64) -> Result<()> {
        if gram.len() != self.n {
            return Err(Error::invalid(format!(
                "n-gram of length {} in order-{} statistics",
                gram.len(),
                self.n
            )));
        }
        if by == 0 {
            return Ok(());
        }
        *self.counts.entry(gram.to_vec()).or_insert(0) += by;
        Ok(())
    }

    pub fn get(&self, gram: &[u32]) -> u64 {
        self.counts.get(gram).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&NGram, u64)> {
        self.counts.iter().map(|(k, &v)| (k, v))
    }

    /// Number of distinct n-grams observed.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Element-wise sum of two statistics of the same order.
    pub fn merged(&self, other: &NGramStats) -> Result<NGramStats> {
        if self.n != other.n {
            return Err(Error::invalid("cannot merge statistics of different orders"));
        }
        let mut out = self.clone();
        out.alphabet_size = self.alphabet_size.max(other.alphabet_size);
        for (g, c) in other.iter() {
            out.increment(g, c)?;
        }
        Ok(out)
    }

    /// Cosine similarity of the raw count vectors.
    pub fn cosine(&self, other: &NGramStats) -> f64 {
        let dot: f64 = self
            .iter()
            .map(|(g, c)| c as f64 * other.get(g) as f64)
            .sum();
        let na = self.iter().map(|(_, c)| (c * c) as f64).sum::<f64>().sqrt();
        let nb = other.iter().map(|(_, c)| (c * c) as f64).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            0.0
        } else {
            dot / (na * nb)
        }
    }
}
