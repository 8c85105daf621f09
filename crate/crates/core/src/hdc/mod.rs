//! Hyperdimensional vector algebra and the embedding of n-gram statistics.
//!
//! Atomic symbols get random bipolar vectors from an [`ItemMemory`]. An
//! n-gram `S1 S2 .. Sn` is mapped to `ρ¹(H_S1) ⊙ ρ²(H_S2) ⊙ .. ⊙ ρⁿ(H_Sn)`,
//! where `ρ` is a cyclic shift and `⊙` component-wise multiplication, and a
//! whole statistics vector is the count-weighted bundle (sum) of those
//! n-gram vectors. Bundles are kept as exact `i64` accumulators; the
//! classifier-facing form is the ℓ2-normalized [`HdEmbedding`].

mod embed;
mod item_memory;
mod stats;
mod vector;

pub use embed::{embed_ngram, embed_stats, embed_stats_raw, embed_weighted};
pub use item_memory::ItemMemory;
pub use stats::{NGram, NGramStats};
pub use vector::{bind, bundle, cosine, permute, HdEmbedding, HdVector};
