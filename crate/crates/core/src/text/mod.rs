//! Raw text to features: cleaning, subword tokenizers, n-gram statistics,
//! sparse count / TF / TF-IDF matrices and dense HD rows.

mod alphabet;
mod bpe;
mod matrix;
mod ngrams;
mod preprocess;
mod semhash;
mod tfidf;

pub use alphabet::Alphabet;
pub use bpe::{BpeModel, END_OF_WORD};
pub use matrix::{FeatureMatrix, Row, Storage};
pub use ngrams::{
    embed_corpus, ngram_stats, stats_to_sparse_features, DocStats, HdEncoder, NGramRange,
    NGramVocabulary,
};
pub use preprocess::{load_stopwords, preprocess, StopWords};
pub use semhash::semhash_tokens;
pub use tfidf::{tf_features, tfidf_features, WordVocabulary};
