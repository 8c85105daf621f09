use std::collections::HashSet;
use std::path::Path;

use crate::error::{Error, Result};

pub type StopWords = HashSet<String>;

/// Drops control characters, lowercases, collapses whitespace and removes
/// stopwords when a list is given.
///
/// Control characters that are also whitespace (tab, newline, ...) act as
/// word separators rather than vanishing, so adjacent words stay apart.
pub fn preprocess(text: &str, stopwords: Option<&StopWords>) -> String {
    let cleaned: String = text
        .chars()
        .filter_map(|c| {
            if c.is_control() {
                c.is_whitespace().then_some(' ')
            } else {
                Some(c)
            }
        })
        .flat_map(char::to_lowercase)
        .collect();
    let words = cleaned.split_whitespace();
    match stopwords {
        Some(stop) => words
            .filter(|w| !stop.contains(*w))
            .collect::<Vec<_>>()
            .join(" "),
        None => words.collect::<Vec<_>>().join(" "),
    }
}

/// Reads a UTF-8 stopword list, one word per line. Blank lines are skipped.
pub fn load_stopwords(path: &Path) -> Result<StopWords> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .map(|l| l.trim().to_lowercase())
        .filter(|l| !l.is_empty())
        .collect())
}
