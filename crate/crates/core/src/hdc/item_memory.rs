use rand::RngCore;

use super::HdVector;
use crate::error::{Error, Result};
use crate::rng;

/// Random bipolar codebook with one column per alphabet symbol.
///
/// Entries are drawn column by column from a single xoshiro256** stream;
/// a draw with its high bit set yields `+1`, otherwise `-1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemMemory {
    dim: usize,
    alphabet_size: usize,
    seed: u64,
    // column-major: symbol s occupies entries[s*dim .. (s+1)*dim]
    entries: Vec<i8>,
}

impl ItemMemory {
    pub fn new(dim: usize, alphabet_size: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("item memory dimensionality must be positive"));
        }
        if alphabet_size == 0 {
            return Err(Error::invalid("item memory alphabet size must be positive"));
        }
        let mut stream = rng::seeded(seed);
        let entries = (0..dim * alphabet_size)
            .map(|_| if stream.next_u64() >> 63 == 1 { 1 } else { -1 })
            .collect();
        Ok(ItemMemory {
            dim,
            alphabet_size,
            seed,
            entries,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn column(&self, symbol: usize) -> Result<&[i8]> {
        if symbol >= self.alphabet_size {
            return Err(Error::invalid(format!(
                "symbol id {symbol} out of range for alphabet of size {}",
                self.alphabet_size
            )));
        }
        Ok(&self.entries[symbol * self.dim..(symbol + 1) * self.dim])
    }

    pub fn atom(&self, symbol: usize) -> Result<HdVector> {
        Ok(HdVector::new(
            self.column(symbol)?.iter().map(|&x| x as i64).collect(),
        ))
    }
}
