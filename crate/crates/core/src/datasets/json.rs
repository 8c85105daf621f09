use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LabeledCorpus, Sample};
use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct Document {
    sentences: Vec<Sentence>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Sentence {
    text: String,
    intent: String,
    training: bool,
}

/// Reads the `{"sentences": [{"text", "intent", "training"}]}` layout.
///
/// Intent ids follow first appearance among training sentences; intents
/// seen only in the test split get the next ids and a warning.
pub fn load_json_corpus(path: &Path) -> Result<LabeledCorpus> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "corpus".to_string());
    parse_json_corpus(&name, &text).map_err(|e| match e {
        Error::Parse {
            line,
            column,
            message,
            ..
        } => Error::Parse {
            path: path.to_path_buf(),
            line,
            column,
            message,
        },
        other => other,
    })
}

pub fn parse_json_corpus(name: &str, text: &str) -> Result<LabeledCorpus> {
    let doc: Document = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: name.into(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut ids: HashMap<String, usize> = HashMap::new();
    let mut class_names = Vec::new();
    let mut corpus = LabeledCorpus {
        name: name.to_string(),
        train: Vec::new(),
        test: Vec::new(),
        class_names: Vec::new(),
        warnings: Vec::new(),
    };
    let mut intern = |intent: &str, class_names: &mut Vec<String>| {
        *ids.entry(intent.to_string()).or_insert_with(|| {
            class_names.push(intent.to_string());
            class_names.len() - 1
        })
    };
    for s in doc.sentences.iter().filter(|s| s.training) {
        let label = intern(&s.intent, &mut class_names);
        corpus.train.push(Sample::new(s.text.clone(), label));
    }
    let n_train_classes = class_names.len();
    for s in doc.sentences.iter().filter(|s| !s.training) {
        let label = intern(&s.intent, &mut class_names);
        corpus.test.push(Sample::new(s.text.clone(), label));
    }
    corpus.class_names = class_names;
    for unseen in &corpus.class_names[n_train_classes..].to_vec() {
        corpus.warn(format!("intent {unseen:?} appears only in the test split"));
    }
    Ok(corpus)
}

impl LabeledCorpus {
    /// Canonical JSON: training sentences first, each split in load order.
    pub fn to_json(&self) -> String {
        let sentence = |s: &Sample, training: bool| Sentence {
            text: s.text.clone(),
            intent: self.class_names[s.label].clone(),
            training,
        };
        let doc = Document {
            sentences: self
                .train
                .iter()
                .map(|s| sentence(s, true))
                .chain(self.test.iter().map(|s| sentence(s, false)))
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("plain data serializes")
    }
}
