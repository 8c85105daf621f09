//! Hyperdimensional embeddings of n-gram statistics for text classification,
//! with the conventional featurizers, classifiers and resource accounting
//! needed to compare the two.
//!
//! ```
//! use hyperembed::hdc::{cosine, embed_stats, ItemMemory, NGramStats};
//!
//! let im = ItemMemory::new(4096, 2, 7).unwrap();
//! let abab = NGramStats::from_symbols(&[0, 1, 0, 1], 2, 2).unwrap();
//! let baba = NGramStats::from_symbols(&[1, 0, 1, 0], 2, 2).unwrap();
//! let h1 = embed_stats(&abab, &im, true).unwrap();
//! let h2 = embed_stats(&baba, &im, true).unwrap();
//! let sim = cosine(h1.as_slice(), h2.as_slice()).unwrap();
//! assert!((sim - abab.cosine(&baba)).abs() < 0.1);
//! ```

pub mod classifiers;
pub mod datasets;
mod error;
pub mod hdc;
pub mod metrics;
pub mod pipeline;
pub mod rng;
pub mod text;

pub use classifiers::{ClassifierKind, Model, TrainConfig};
pub use datasets::{LabeledCorpus, Sample};
pub use error::{Error, Result};
pub use hdc::{HdEmbedding, HdVector, ItemMemory, NGramStats};
pub use metrics::{BenchCell, F1Scores, MemoryModel, Ratios};
pub use pipeline::{Base, FeaturizeConfig, Featurizer};
pub use text::{FeatureMatrix, Storage};
