//! Seeded random streams shared by every stochastic component.
//!
//! All randomness flows from xoshiro256** seeded through a splitmix64
//! expansion of a 64-bit user seed, so a run is reproducible on any platform
//! and in any language that implements the same two generators.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;

pub type Rng = Xoshiro256StarStar;

/// Generator for `seed`, state filled by four splitmix64 outputs.
pub fn seeded(seed: u64) -> Rng {
    Xoshiro256StarStar::seed_from_u64(seed)
}

/// Derives an independent stream seed from a base seed and a label.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    // one splitmix64 finalizer round over the combined input
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
