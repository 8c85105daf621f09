use std::collections::{BTreeSet, HashMap};

/// Dense symbol ids `0..len()`; the last id is reserved for symbols not
/// seen when the alphabet was built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, u32>,
}

impl Alphabet {
    /// Builds a sorted alphabet from the observed symbols.
    pub fn build<I, S>(observed: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let unique: BTreeSet<String> = observed.into_iter().map(|s| s.as_ref().to_string()).collect();
        let symbols: Vec<String> = unique.into_iter().collect();
        let index = symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        Alphabet { symbols, index }
    }

    /// Alphabet size including the out-of-vocabulary slot.
    pub fn len(&self) -> usize {
        self.symbols.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn oov_id(&self) -> u32 {
        self.symbols.len() as u32
    }

    pub fn id(&self, symbol: &str) -> u32 {
        self.index.get(symbol).copied().unwrap_or(self.oov_id())
    }

    pub fn symbol(&self, id: u32) -> Option<&str> {
        self.symbols.get(id as usize).map(String::as_str)
    }

    pub fn encode<S: AsRef<str>>(&self, symbols: &[S]) -> Vec<u32> {
        symbols.iter().map(|s| self.id(s.as_ref())).collect()
    }
}
