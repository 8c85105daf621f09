//! Byte Pair Encoding over characters.
//!
//! Training splits text on whitespace, spells each word as characters
//! followed by [`END_OF_WORD`], then repeatedly merges the most frequent
//! adjacent symbol pair. Ties go to the lexicographically smallest pair.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// End-of-word marker. The character is reserved: literal occurrences in
/// input text are dropped before spelling words out.
pub const END_OF_WORD: &str = "\u{b7}";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BpeModel {
    merges: Vec<(String, String)>,
    vocab: Vec<String>,
    vocab_size: usize,
    ranks: HashMap<(String, String), usize>,
}

fn spell(word: &str) -> Vec<String> {
    word.chars()
        .filter(|&c| c != '\u{b7}')
        .map(String::from)
        .chain(std::iter::once(END_OF_WORD.to_string()))
        .collect()
}

fn merge_pair(symbols: &mut Vec<String>, left: &str, right: &str) {
    let mut i = 0;
    while i + 1 < symbols.len() {
        if symbols[i] == left && symbols[i + 1] == right {
            let merged = format!("{left}{right}");
            symbols[i] = merged;
            symbols.remove(i + 1);
        }
        i += 1;
    }
}

impl BpeModel {
    pub fn train<S: AsRef<str>>(corpus: &[S], vocab_size: usize) -> Result<Self> {
        let mut word_freq: BTreeMap<&str, u64> = BTreeMap::new();
        for text in corpus {
            for w in text.as_ref().split_whitespace() {
                *word_freq.entry(w).or_insert(0) += 1;
            }
        }
        let mut words: Vec<(Vec<String>, u64)> =
            word_freq.into_iter().map(|(w, f)| (spell(w), f)).collect();
        let initial: BTreeSet<String> = words
            .iter()
            .flat_map(|(s, _)| s.iter().cloned())
            .chain(std::iter::once(END_OF_WORD.to_string()))
            .collect();
        if vocab_size < initial.len() {
            return Err(Error::invalid(format!(
                "BPE vocabulary size {vocab_size} is smaller than the character vocabulary ({})",
                initial.len()
            )));
        }
        let mut vocab: Vec<String> = initial.into_iter().collect();
        let mut merges = Vec::new();
        while vocab.len() < vocab_size {
            let mut pairs: BTreeMap<(&str, &str), u64> = BTreeMap::new();
            for (symbols, freq) in &words {
                for w in symbols.windows(2) {
                    *pairs.entry((w[0].as_str(), w[1].as_str())).or_insert(0) += freq;
                }
            }
            // BTreeMap iterates pairs in lexicographic order, so the first
            // maximum wins ties.
            let Some((best, count)) = pairs.iter().fold(None, |acc, (p, &c)| match acc {
                Some((_, bc)) if bc >= c => acc,
                _ => Some((*p, c)),
            }) else {
                break;
            };
            if count < 2 {
                break;
            }
            let (left, right) = (best.0.to_string(), best.1.to_string());
            for (symbols, _) in words.iter_mut() {
                merge_pair(symbols, &left, &right);
            }
            vocab.push(format!("{left}{right}"));
            merges.push((left, right));
        }
        Ok(Self::from_parts(merges, vocab))
    }

    fn from_parts(merges: Vec<(String, String)>, vocab: Vec<String>) -> Self {
        let ranks = merges
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        BpeModel {
            vocab_size: vocab.len(),
            merges,
            vocab,
            ranks,
        }
    }

    pub fn merges(&self) -> &[(String, String)] {
        &self.merges
    }

    /// Initial characters followed by one symbol per merge. Empty for
    /// models read from disk, which only persist the merge list.
    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    pub fn vocab_size(&self) -> usize {
        self.vocab_size
    }

    pub fn initial_vocab_size(&self) -> usize {
        self.vocab_size - self.merges.len()
    }

    /// Segments one word by applying merges in learned order.
    pub fn encode_word(&self, word: &str) -> Vec<String> {
        let mut symbols = spell(word);
        loop {
            let best = symbols
                .windows(2)
                .filter_map(|w| self.ranks.get(&(w[0].clone(), w[1].clone())))
                .min();
            let Some(&rank) = best else { break };
            let (l, r) = &self.merges[rank];
            merge_pair(&mut symbols, l, r);
        }
        symbols
    }

    pub fn encode(&self, text: &str) -> Vec<String> {
        text.split_whitespace()
            .flat_map(|w| self.encode_word(w))
            .collect()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "bpe v1 {}", self.vocab_size)?;
        for (l, r) in &self.merges {
            writeln!(out, "{l}\t{r}\t{l}{r}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_to(std::io::BufWriter::new(f))
            .map_err(|e| Error::io(path, e))
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let bad = |msg: String| Error::Format {
            what: "BPE model",
            message: msg,
        };
        let mut lines = input.lines();
        let header = lines
            .next()
            .ok_or_else(|| bad("empty file".into()))?
            .map_err(|e| bad(e.to_string()))?;
        let vocab_size: usize = header
            .strip_prefix("bpe v1 ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad(format!("bad header {header:?}")))?;
        let mut merges = Vec::new();
        for (i, line) in lines.enumerate() {
            let line = line.map_err(|e| bad(e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            if parts.len() != 3 || format!("{}{}", parts[0], parts[1]) != parts[2] {
                return Err(bad(format!("line {}: malformed merge {line:?}", i + 2)));
            }
            merges.push((parts[0].to_string(), parts[1].to_string()));
        }
        if merges.len() > vocab_size {
            return Err(bad(format!(
                "{} merges exceed declared vocabulary size {vocab_size}",
                merges.len()
            )));
        }
        let mut model = Self::from_parts(merges, Vec::new());
        model.vocab_size = vocab_size;
        Ok(model)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_from(std::io::BufReader::new(f))
    }
}
