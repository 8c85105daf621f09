use std::io::Write;

use super::F1Scores;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "dataset,featurizer,classifier,d,f1_weighted,f1_micro,f1_macro,train_s,test_s,featurize_s,memory_bytes,speedup_train,speedup_test,memory_reduction";

/// Baseline-over-current resource ratios; values above 1 favour `current`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ratios {
    pub speedup_train: f64,
    pub speedup_test: f64,
    pub memory_reduction: f64,
}

/// One (featurizer, classifier) measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchCell {
    pub dataset: String,
    pub featurizer: String,
    pub classifier: String,
    /// Feature dimensionality seen by the classifier.
    pub d: usize,
    pub f1: Option<F1Scores>,
    /// Medians in seconds.
    pub train_s: f64,
    pub test_s: f64,
    pub featurize_s: f64,
    pub memory_bytes: u64,
    pub ratios: Option<Ratios>,
    /// `None` when the cell ran to completion, otherwise the failure.
    pub error: Option<String>,
}

impl BenchCell {
    pub fn failed(dataset: &str, featurizer: &str, classifier: &str, error: String) -> Self {
        BenchCell {
            dataset: dataset.to_string(),
            featurizer: featurizer.to_string(),
            classifier: classifier.to_string(),
            d: 0,
            f1: None,
            train_s: 0.0,
            test_s: 0.0,
            featurize_s: 0.0,
            memory_bytes: 0,
            ratios: None,
            error: Some(error),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }

    pub fn f1_weighted(&self) -> f64 {
        self.f1.as_ref().map_or(0.0, |f| f.weighted)
    }
}

pub fn relative_report(current: &BenchCell, baseline: &BenchCell) -> Result<Ratios> {
    let positive = |v: f64, what: &str| {
        if v > 0.0 && v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Degenerate(format!("{what} is {v}")))
        }
    };
    let ratio = |base: f64, cur: f64, what: &str| -> Result<f64> {
        Ok(positive(base, &format!("baseline {what}"))? / positive(cur, &format!("current {what}"))?)
    };
    Ok(Ratios {
        speedup_train: ratio(baseline.train_s, current.train_s, "train time")?,
        speedup_test: ratio(baseline.test_s, current.test_s, "test time")?,
        memory_reduction: ratio(
            baseline.memory_bytes as f64,
            current.memory_bytes as f64,
            "memory",
        )?,
    })
}

fn field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Writes the report. Resolved configuration goes first as `#! key = value`
/// lines; a trailing `status` column is added only if some cell failed.
pub fn write_csv<W: Write>(mut out: W, config: &[(String, String)], cells: &[BenchCell]) -> std::io::Result<()> {
    for (k, v) in config {
        writeln!(out, "#! {k} = {v}")?;
    }
    let with_status = cells.iter().any(|c| !c.is_ok());
    if with_status {
        writeln!(out, "{CSV_HEADER},status")?;
    } else {
        writeln!(out, "{CSV_HEADER}")?;
    }
    for c in cells {
        let mut cols = vec![field(&c.dataset), field(&c.featurizer), field(&c.classifier)];
        if let (Some(f1), true) = (&c.f1, c.is_ok()) {
            cols.push(c.d.to_string());
            cols.push(f1.weighted.to_string());
            cols.push(f1.micro.to_string());
            cols.push(f1.macro_avg.to_string());
            cols.push(format!("{:.9}", c.train_s));
            cols.push(format!("{:.9}", c.test_s));
            cols.push(format!("{:.9}", c.featurize_s));
            cols.push(c.memory_bytes.to_string());
            match &c.ratios {
                Some(r) => {
                    cols.push(format!("{:.4}", r.speedup_train));
                    cols.push(format!("{:.4}", r.speedup_test));
                    cols.push(format!("{:.4}", r.memory_reduction));
                }
                None => cols.extend(std::iter::repeat_n(String::new(), 3)),
            }
        } else {
            cols.extend(std::iter::repeat_n(String::new(), 11));
        }
        if with_status {
            cols.push(match &c.error {
                None => "ok".to_string(),
                Some(e) => field(&format!("error: {e}")),
            });
        }
        writeln!(out, "{}", cols.join(","))?;
    }
    Ok(())
}
