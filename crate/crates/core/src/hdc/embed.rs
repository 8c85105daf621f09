use super::{HdEmbedding, HdVector, ItemMemory, NGramStats};
use crate::error::{Error, Result};

fn check_gram(gram: &[u32], im: &ItemMemory) -> Result<()> {
    if gram.is_empty() {
        return Err(Error::invalid("cannot embed an empty n-gram"));
    }
    if let Some(&bad) = gram.iter().find(|&&s| s as usize >= im.alphabet_size()) {
        return Err(Error::invalid(format!(
            "symbol id {bad} out of range for alphabet of size {}",
            im.alphabet_size()
        )));
    }
    Ok(())
}

// acc[i] += weight * Π_j H[gram[j-1]][(i - j) mod d], j = 1..=n
fn accumulate<T, F>(acc: &mut [T], gram: &[u32], im: &ItemMemory, mut add: F)
where
    F: FnMut(&mut T, i8),
{
    let d = im.dim();
    let cols: Vec<&[i8]> = gram
        .iter()
        .map(|&s| im.column(s as usize).expect("checked by caller"))
        .collect();
    for (i, slot) in acc.iter_mut().enumerate() {
        let mut prod = 1i8;
        for (k, col) in cols.iter().enumerate() {
            let shift = (k + 1) % d;
            prod *= col[(i + d - shift) % d];
        }
        add(slot, prod);
    }
}

/// HD vector of one n-gram: the binding of `ρ^j(H_{S_j})` over 1-based positions `j`.
pub fn embed_ngram(gram: &[u32], im: &ItemMemory) -> Result<HdVector> {
    check_gram(gram, im)?;
    let mut out = vec![0i64; im.dim()];
    accumulate(&mut out, gram, im, |slot, p| *slot = p as i64);
    Ok(HdVector::new(out))
}

/// Count-weighted bundle of every observed n-gram, as an exact integer vector.
pub fn embed_stats_raw(stats: &NGramStats, im: &ItemMemory) -> Result<HdVector> {
    if stats.alphabet_size() > im.alphabet_size() {
        return Err(Error::invalid(format!(
            "statistics alphabet ({}) larger than item memory alphabet ({})",
            stats.alphabet_size(),
            im.alphabet_size()
        )));
    }
    let mut acc = vec![0i64; im.dim()];
    for (gram, count) in stats.iter() {
        check_gram(gram, im)?;
        let w = count as i64;
        accumulate(&mut acc, gram, im, |slot, p| *slot += w * p as i64);
    }
    Ok(HdVector::new(acc))
}

pub fn embed_stats(stats: &NGramStats, im: &ItemMemory, normalize: bool) -> Result<HdEmbedding> {
    Ok(embed_stats_raw(stats, im)?.to_embedding(normalize))
}

/// Real-weighted bundle `Σ w · m(gram)`, used for TF-IDF style weights.
pub fn embed_weighted<'a, I>(items: I, im: &ItemMemory) -> Result<HdEmbedding>
where
    I: IntoIterator<Item = (&'a [u32], f64)>,
{
    let mut acc = vec![0f64; im.dim()];
    for (gram, w) in items {
        check_gram(gram, im)?;
        accumulate(&mut acc, gram, im, |slot, p| *slot += w * p as f64);
    }
    Ok(HdEmbedding::new(acc))
}
