//! Featurize, train, evaluate: one benchmark cell at a time.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::classifiers::{train, ClassifierKind, TrainConfig};
use crate::datasets::LabeledCorpus;
use crate::error::{Error, Result};
use crate::hdc::{embed_weighted, ItemMemory};
use crate::metrics::{f1_scores, relative_report, time_repeated, BenchCell, MemoryModel};
use crate::rng::derive_seed;
use crate::text::{
    embed_corpus, preprocess, semhash_tokens, stats_to_sparse_features, tf_features,
    tfidf_features, Alphabet, BpeModel, DocStats, FeatureMatrix, HdEncoder, NGramRange,
    NGramVocabulary, StopWords, Storage, WordVocabulary,
};

/// Dimensions `2^5 ..= 2^14`.
pub const SWEEP_DIMS: [usize; 10] = [32, 64, 128, 256, 512, 1024, 2048, 4096, 8192, 16384];

/// Statistics family a featurizer is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Base {
    /// Character n-grams of the cleaned text.
    Ngram,
    /// n-grams over SemHash subword tokens.
    Semhash,
    /// n-grams over BPE subword tokens.
    Bpe,
    /// Word counts.
    Tf,
    /// Smoothed, row-normalized TF-IDF.
    TfIdf,
}

impl Base {
    pub const ALL: [Base; 5] = [Base::Ngram, Base::Semhash, Base::Bpe, Base::Tf, Base::TfIdf];

    pub fn name(self) -> &'static str {
        match self {
            Base::Ngram => "ngram",
            Base::Semhash => "semhash-ngram",
            Base::Bpe => "bpe-ngram",
            Base::Tf => "tf",
            Base::TfIdf => "tfidf",
        }
    }

    fn short(self) -> &'static str {
        match self {
            Base::Ngram => "ngram",
            Base::Semhash => "semhash",
            Base::Bpe => "bpe",
            Base::Tf => "tf",
            Base::TfIdf => "tfidf",
        }
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ngram" | "char" => Ok(Base::Ngram),
            "semhash" | "semhash-ngram" => Ok(Base::Semhash),
            "bpe" | "bpe-ngram" => Ok(Base::Bpe),
            "tf" => Ok(Base::Tf),
            "tfidf" | "tf-idf" => Ok(Base::TfIdf),
            _ => Err(Error::invalid(format!("unknown featurizer base {s:?}"))),
        }
    }
}

/// A conventional featurizer or its HD embedding, e.g. `semhash-ngram` or
/// `hd:512:semhash`. A bare `hd:<d>` embeds SemHash statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Featurizer {
    Sparse(Base),
    Hd { dim: usize, base: Base },
}

impl Featurizer {
    pub fn base(self) -> Base {
        match self {
            Featurizer::Sparse(b) | Featurizer::Hd { base: b, .. } => b,
        }
    }

    pub fn is_hd(self) -> bool {
        matches!(self, Featurizer::Hd { .. })
    }

    /// The conventional featurizer HD results are compared against.
    pub fn baseline(self) -> Featurizer {
        Featurizer::Sparse(self.base())
    }
}

impl fmt::Display for Featurizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Featurizer::Sparse(b) => f.write_str(b.name()),
            Featurizer::Hd { dim, base } => write!(f, "hd:{dim}:{}", base.short()),
        }
    }
}

impl FromStr for Featurizer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let Some(rest) = s.strip_prefix("hd:") else {
            return Ok(Featurizer::Sparse(s.parse()?));
        };
        let (dim, base) = match rest.split_once(':') {
            Some((d, b)) => (d, b.parse()?),
            None => (rest, Base::Semhash),
        };
        let dim = dim
            .parse::<usize>()
            .ok()
            .filter(|&d| d > 0)
            .ok_or_else(|| Error::invalid(format!("bad HD dimension in {s:?}")))?;
        Ok(Featurizer::Hd { dim, base })
    }
}

/// Which symbols the n-gram statistics run over for subword featurizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolMode {
    /// Characters of the space-joined token stream.
    Chars,
    /// Whole subword tokens.
    Tokens,
}

impl FromStr for SymbolMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "chars" => Ok(SymbolMode::Chars),
            "tokens" => Ok(SymbolMode::Tokens),
            _ => Err(Error::invalid(format!("unknown alphabet mode {s:?}"))),
        }
    }
}

impl fmt::Display for SymbolMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolMode::Chars => "chars",
            SymbolMode::Tokens => "tokens",
        })
    }
}

/// Storage the memory model charges conventional features with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaselineStorage {
    /// One 8-byte scalar per vocabulary column, like a positional vector.
    Dense,
    /// 16 bytes per nonzero.
    Sparse,
}

impl FromStr for BaselineStorage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dense" => Ok(BaselineStorage::Dense),
            "sparse" => Ok(BaselineStorage::Sparse),
            _ => Err(Error::invalid(format!("unknown baseline storage {s:?}"))),
        }
    }
}

impl fmt::Display for BaselineStorage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineStorage::Dense => "dense",
            BaselineStorage::Sparse => "sparse",
        })
    }
}

#[derive(Debug, Clone)]
pub struct FeaturizeConfig {
    pub range: NGramRange,
    pub symbols: SymbolMode,
    pub bpe_vocab: usize,
    pub seed: u64,
    pub baseline_storage: BaselineStorage,
    pub stopwords: Option<StopWords>,
}

impl Default for FeaturizeConfig {
    fn default() -> Self {
        FeaturizeConfig {
            range: NGramRange { min: 2, max: 4 },
            symbols: SymbolMode::Chars,
            bpe_vocab: 1000,
            seed: 0,
            baseline_storage: BaselineStorage::Dense,
            stopwords: None,
        }
    }
}

/// Train and test matrices of one featurizer.
#[derive(Debug, Clone)]
pub struct Features {
    pub featurizer: Featurizer,
    pub train: FeatureMatrix,
    pub test: FeatureMatrix,
    /// Size of the conventional vocabulary the features derive from.
    pub vocab_size: usize,
    pub featurize_s: f64,
    charge_dense: bool,
}

impl Features {
    /// Bytes of both splits under the memory model.
    pub fn feature_bytes(&self) -> u64 {
        let bytes = |m: &FeatureMatrix| {
            if self.charge_dense {
                MemoryModel::feature_bytes(Storage::DenseReal, m.n_samples() * m.n_features())
            } else {
                m.feature_bytes()
            }
        };
        bytes(&self.train) + bytes(&self.test)
    }
}

/// Per-document symbol sequences for the n-gram families.
fn symbol_docs(
    base: Base,
    train: &[String],
    test: &[String],
    cfg: &FeaturizeConfig,
) -> Result<(Vec<Vec<String>>, Vec<Vec<String>>)> {
    let chars = |s: &str| s.chars().map(String::from).collect::<Vec<_>>();
    let tokens: Box<dyn Fn(&str) -> Vec<String>> = match base {
        Base::Ngram => {
            return Ok((
                train.iter().map(|t| chars(t)).collect(),
                test.iter().map(|t| chars(t)).collect(),
            ))
        }
        Base::Semhash => Box::new(semhash_tokens),
        Base::Bpe => {
            let model = BpeModel::train(train, cfg.bpe_vocab)?;
            Box::new(move |t| model.encode(t))
        }
        Base::Tf | Base::TfIdf => unreachable!("word featurizers have no n-gram symbols"),
    };
    let map = |t: &String| {
        let toks = tokens(t);
        match cfg.symbols {
            SymbolMode::Chars => chars(&toks.join(" ")),
            SymbolMode::Tokens => toks,
        }
    };
    Ok((train.iter().map(map).collect(), test.iter().map(map).collect()))
}

/// Builds train/test features; every vocabulary and model is fitted on the
/// training split only.
pub fn featurize(corpus: &LabeledCorpus, featurizer: Featurizer, cfg: &FeaturizeConfig) -> Result<Features> {
    let start = Instant::now();
    let clean = |samples: &[crate::datasets::Sample]| {
        samples
            .iter()
            .map(|s| preprocess(&s.text, cfg.stopwords.as_ref()))
            .collect::<Vec<_>>()
    };
    let (train_text, test_text) = (clean(&corpus.train), clean(&corpus.test));
    let (train_y, test_y) = (corpus.train_labels(), corpus.test_labels());
    let k = corpus.n_classes();

    let (train, test, vocab_size) = match featurizer.base() {
        Base::Tf | Base::TfIdf => {
            let words = |t: &[String]| {
                t.iter()
                    .map(|s| s.split_whitespace().map(String::from).collect::<Vec<_>>())
                    .collect::<Vec<_>>()
            };
            let (train_w, test_w) = (words(&train_text), words(&test_text));
            let vocab = WordVocabulary::fit(&train_w);
            let tfidf = featurizer.base() == Base::TfIdf;
            match featurizer {
                Featurizer::Sparse(_) => {
                    let build = |w: &[Vec<String>], y: Vec<usize>| {
                        if tfidf {
                            tfidf_features(w, &vocab, y, k)
                        } else {
                            tf_features(w, &vocab, y, k)
                        }
                    };
                    (build(&train_w, train_y)?, build(&test_w, test_y)?, vocab.len())
                }
                Featurizer::Hd { dim, .. } => {
                    let im = ItemMemory::new(dim, vocab.len().max(1), derive_seed(cfg.seed, 1))?;
                    let embed = |w: &[Vec<String>], y: Vec<usize>| -> Result<FeatureMatrix> {
                        let mut values = Vec::with_capacity(w.len() * dim);
                        for doc in w {
                            let weights = if tfidf {
                                vocab.tfidf_weights(doc)
                            } else {
                                vocab.term_counts(doc)
                            };
                            let grams: Vec<[u32; 1]> = weights.iter().map(|&(j, _)| [j]).collect();
                            let mut h = embed_weighted(
                                grams.iter().zip(&weights).map(|(g, &(_, v))| (&g[..], v)),
                                &im,
                            )?;
                            h.normalize();
                            values.extend(h.into_inner());
                        }
                        FeatureMatrix::dense(dim, values, y, k)
                    };
                    (embed(&train_w, train_y)?, embed(&test_w, test_y)?, vocab.len())
                }
            }
        }
        base => {
            let (train_s, test_s) = symbol_docs(base, &train_text, &test_text, cfg)?;
            let alphabet = Alphabet::build(train_s.iter().flatten());
            let stats = |docs: &[Vec<String>]| {
                docs.iter()
                    .map(|d| DocStats::compute(&alphabet.encode(d), cfg.range, alphabet.len()))
                    .collect::<Result<Vec<_>>>()
            };
            let (train_d, test_d) = (stats(&train_s)?, stats(&test_s)?);
            let vocab = NGramVocabulary::fit(&train_d);
            match featurizer {
                Featurizer::Sparse(_) => (
                    stats_to_sparse_features(&train_d, &vocab, train_y, k)?,
                    stats_to_sparse_features(&test_d, &vocab, test_y, k)?,
                    vocab.len(),
                ),
                Featurizer::Hd { dim, .. } => {
                    let enc = HdEncoder::new(dim, alphabet.len(), cfg.range, cfg.seed)?;
                    (
                        embed_corpus(&train_d, &enc, train_y, k)?,
                        embed_corpus(&test_d, &enc, test_y, k)?,
                        vocab.len(),
                    )
                }
            }
        }
    };
    Ok(Features {
        featurizer,
        train,
        test,
        vocab_size,
        featurize_s: start.elapsed().as_secs_f64(),
        charge_dense: !featurizer.is_hd() && cfg.baseline_storage == BaselineStorage::Dense,
    })
}

/// Trains and tests one classifier `runs` times, keeping medians.
///
/// Failures are returned as a failed cell rather than an error so that a
/// report can still be written.
pub fn run_cell(
    dataset: &str,
    features: &Features,
    classifier: ClassifierKind,
    cfg: &TrainConfig,
    runs: usize,
) -> BenchCell {
    let name = features.featurizer.to_string();
    let fail = |e: Error| BenchCell::failed(dataset, &name, classifier.name(), e.to_string());
    let (model, train_t) = time_repeated(runs, || train(classifier, &features.train, cfg));
    let model = match model {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let (pred, test_t) = time_repeated(runs, || model.predict(&features.test));
    let scores = pred.and_then(|p| f1_scores(features.test.labels(), &p, features.test.n_classes()));
    let f1 = match scores {
        Ok(f) => f,
        Err(e) => return fail(e),
    };
    BenchCell {
        dataset: dataset.to_string(),
        featurizer: name,
        classifier: classifier.name().to_string(),
        d: features.train.n_features(),
        f1: Some(f1),
        train_s: train_t.median,
        test_s: test_t.median,
        featurize_s: features.featurize_s,
        memory_bytes: features.feature_bytes() + MemoryModel::model_bytes(model.parameter_count()),
        ratios: None,
        error: None,
    }
}

/// Adds baseline ratios to every HD cell that has a matching conventional
/// cell (same dataset, base and classifier).
pub fn attach_ratios(cells: &mut [BenchCell]) {
    for i in 0..cells.len() {
        let Ok(Featurizer::Hd { base, .. }) = cells[i].featurizer.parse::<Featurizer>() else {
            continue;
        };
        let baseline_name = Featurizer::Sparse(base).to_string();
        let baseline = cells.iter().find(|c| {
            c.is_ok()
                && c.dataset == cells[i].dataset
                && c.classifier == cells[i].classifier
                && c.featurizer == baseline_name
        });
        if let (Some(b), true) = (baseline, cells[i].is_ok()) {
            match relative_report(&cells[i], b) {
                Ok(r) => cells[i].ratios = Some(r),
                Err(e) => log::warn!("no ratios for {}: {e}", cells[i].featurizer),
            }
        }
    }
}

/// Featurizers in run order, with the conventional baseline of every HD
/// featurizer inserted ahead of it when missing.
pub fn with_baselines(featurizers: &[Featurizer]) -> Vec<Featurizer> {
    let mut out: Vec<Featurizer> = Vec::new();
    for &f in featurizers {
        if f.is_hd() && !out.contains(&f.baseline()) && !featurizers.contains(&f.baseline()) {
            out.push(f.baseline());
        }
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Every (featurizer, classifier) cell, baselines included, with ratios.
pub fn benchmark(
    corpus: &LabeledCorpus,
    featurizers: &[Featurizer],
    classifiers: &[ClassifierKind],
    fcfg: &FeaturizeConfig,
    tcfg: &TrainConfig,
    runs: usize,
) -> Result<Vec<BenchCell>> {
    let mut cells = Vec::new();
    for f in with_baselines(featurizers) {
        let features = featurize(corpus, f, fcfg)?;
        for &c in classifiers {
            log::info!("{} / {f} / {c}", corpus.name);
            cells.push(run_cell(&corpus.name, &features, c, tcfg, runs));
        }
    }
    attach_ratios(&mut cells);
    Ok(cells)
}

/// One HD cell per dimension, each with ratios against the conventional
/// featurizer of the same base. The baseline cell is returned separately.
pub fn dimension_sweep(
    corpus: &LabeledCorpus,
    base: Base,
    classifier: ClassifierKind,
    dims: &[usize],
    fcfg: &FeaturizeConfig,
    tcfg: &TrainConfig,
    runs: usize,
) -> Result<(BenchCell, Vec<BenchCell>)> {
    if dims.is_empty() {
        return Err(Error::invalid("dimension sweep needs at least one dimension"));
    }
    let baseline_features = featurize(corpus, Featurizer::Sparse(base), fcfg)?;
    let baseline = run_cell(&corpus.name, &baseline_features, classifier, tcfg, runs);
    let mut rows = Vec::with_capacity(dims.len());
    for &dim in dims {
        let features = featurize(corpus, Featurizer::Hd { dim, base }, fcfg)?;
        let mut cell = run_cell(&corpus.name, &features, classifier, tcfg, runs);
        if cell.is_ok() && baseline.is_ok() {
            cell.ratios = relative_report(&cell, &baseline).ok();
        }
        rows.push(cell);
    }
    Ok((baseline, rows))
}
