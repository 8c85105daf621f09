use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use super::{LabeledCorpus, Sample};
use crate::error::{Error, Result};

const SPLITS: [&str; 2] = ["train", "test"];

/// Reads `root/{train,test}/<class>/<document>` trees.
///
/// Classes are the sorted union of the class directory names of both splits.
/// Documents are read as lossy UTF-8 in file-name order. Anything that does
/// not fit the layout is skipped with a warning.
pub fn load_dir_corpus(root: &Path) -> Result<LabeledCorpus> {
    let mut corpus = LabeledCorpus {
        name: root
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "corpus".to_string()),
        train: Vec::new(),
        test: Vec::new(),
        class_names: Vec::new(),
        warnings: Vec::new(),
    };

    let mut classes = BTreeSet::new();
    let mut split_classes = Vec::new();
    for split in SPLITS {
        let dir = root.join(split);
        let mut found = Vec::new();
        for entry in sorted_entries(&dir)? {
            if entry.is_dir() {
                let name = entry.file_name().unwrap().to_string_lossy().into_owned();
                classes.insert(name.clone());
                found.push((name, entry));
            } else {
                corpus.warn(format!("ignoring stray file {}", entry.display()));
            }
        }
        split_classes.push(found);
    }
    corpus.class_names = classes.into_iter().collect();

    for (split, found) in SPLITS.iter().zip(split_classes) {
        for (name, dir) in found {
            let label = corpus
                .class_names
                .binary_search(&name)
                .expect("class collected above");
            let mut n = 0;
            for doc in sorted_entries(&dir)? {
                if !doc.is_file() {
                    corpus.warn(format!("ignoring nested directory {}", doc.display()));
                    continue;
                }
                let bytes = fs::read(&doc).map_err(|e| Error::io(&doc, e))?;
                let sample = Sample::new(String::from_utf8_lossy(&bytes).into_owned(), label);
                match *split {
                    "train" => corpus.train.push(sample),
                    _ => corpus.test.push(sample),
                }
                n += 1;
            }
            if n == 0 {
                corpus.warn(format!("class directory {} is empty", dir.display()));
            }
        }
    }
    Ok(corpus)
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut out = fs::read_dir(dir)
        .map_err(|e| Error::io(dir, e))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()
        .map_err(|e| Error::io(dir, e))?;
    out.sort();
    Ok(out)
}
