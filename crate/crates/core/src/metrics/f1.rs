use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct F1Scores {
    pub per_class: Vec<f64>,
    pub micro: f64,
    pub macro_avg: f64,
    pub weighted: f64,
}

fn f1(tp: f64, fp: f64, fn_: f64) -> f64 {
    let p = if tp + fp > 0.0 { tp / (tp + fp) } else { 0.0 };
    let r = if tp + fn_ > 0.0 { tp / (tp + fn_) } else { 0.0 };
    if p + r > 0.0 {
        2.0 * p * r / (p + r)
    } else {
        0.0
    }
}

/// Per-class, micro, macro and support-weighted F1.
///
/// Macro averages over the classes that occur in either `y_true` or
/// `y_pred`; per-class entries for absent classes are 0.
pub fn f1_scores(y_true: &[usize], y_pred: &[usize], n_classes: usize) -> Result<F1Scores> {
    if y_true.is_empty() {
        return Err(Error::invalid("F1 of an empty label set"));
    }
    if y_true.len() != y_pred.len() {
        return Err(Error::invalid(format!(
            "{} true labels vs {} predictions",
            y_true.len(),
            y_pred.len()
        )));
    }
    if let Some(&bad) = y_true.iter().chain(y_pred).find(|&&l| l >= n_classes) {
        return Err(Error::invalid(format!("label {bad} out of range for {n_classes} classes")));
    }
    let mut tp = vec![0.0; n_classes];
    let mut fp = vec![0.0; n_classes];
    let mut fn_ = vec![0.0; n_classes];
    for (&t, &p) in y_true.iter().zip(y_pred) {
        if t == p {
            tp[t] += 1.0;
        } else {
            fp[p] += 1.0;
            fn_[t] += 1.0;
        }
    }
    let per_class: Vec<f64> = (0..n_classes).map(|c| f1(tp[c], fp[c], fn_[c])).collect();
    let support: Vec<f64> = (0..n_classes).map(|c| tp[c] + fn_[c]).collect();
    let active: Vec<usize> = (0..n_classes)
        .filter(|&c| support[c] > 0.0 || fp[c] > 0.0)
        .collect();
    let macro_avg = active.iter().map(|&c| per_class[c]).sum::<f64>() / active.len() as f64;
    let n = y_true.len() as f64;
    let weighted = (0..n_classes).map(|c| per_class[c] * support[c]).sum::<f64>() / n;
    let micro = f1(tp.iter().sum(), fp.iter().sum(), fn_.iter().sum());
    Ok(F1Scores {
        per_class,
        micro,
        macro_avg,
        weighted,
    })
}
