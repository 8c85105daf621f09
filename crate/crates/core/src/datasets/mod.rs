//! Labeled corpora with predetermined train/test splits.

mod balance;
mod dir;
mod json;
mod synth;

pub use balance::balance_by_oversampling;
pub use dir::load_dir_corpus;
pub use json::{load_json_corpus, parse_json_corpus};
pub use synth::synth_corpus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub text: String,
    pub label: usize,
}

impl Sample {
    pub fn new(text: impl Into<String>, label: usize) -> Self {
        Sample {
            text: text.into(),
            label,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledCorpus {
    pub name: String,
    pub train: Vec<Sample>,
    pub test: Vec<Sample>,
    /// Class names indexed by class id.
    pub class_names: Vec<String>,
    /// Problems found while loading that did not stop the load.
    pub warnings: Vec<String>,
}

impl LabeledCorpus {
    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn train_counts(&self) -> Vec<usize> {
        counts(&self.train, self.n_classes())
    }

    pub fn test_counts(&self) -> Vec<usize> {
        counts(&self.test, self.n_classes())
    }

    pub fn train_labels(&self) -> Vec<usize> {
        self.train.iter().map(|s| s.label).collect()
    }

    pub fn test_labels(&self) -> Vec<usize> {
        self.test.iter().map(|s| s.label).collect()
    }

    pub(crate) fn warn(&mut self, msg: String) {
        log::warn!("{}: {msg}", self.name);
        self.warnings.push(msg);
    }
}

fn counts(samples: &[Sample], k: usize) -> Vec<usize> {
    let mut c = vec![0; k];
    samples.iter().for_each(|s| c[s.label] += 1);
    c
}
