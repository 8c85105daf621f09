//! Command-line front end: argument and config resolution plus the
//! `benchmark`, `sweep`, `embed` and `tokenize` commands.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use hyperembed::datasets::{
    balance_by_oversampling, load_dir_corpus, load_json_corpus, synth_corpus,
};
use hyperembed::metrics::{write_csv, BenchCell};
use hyperembed::pipeline::{
    benchmark, dimension_sweep, featurize, BaselineStorage, SWEEP_DIMS,
};
use hyperembed::text::{load_stopwords, preprocess, semhash_tokens, BpeModel, NGramRange};
use hyperembed::{Base, ClassifierKind, FeaturizeConfig, Featurizer, LabeledCorpus, Sample, TrainConfig};

pub const EMBEDDING_MAGIC: &[u8] = b"he-emb v1\n";

/// Problem with the user's input (flags, config, dataset); exits with 2.
#[derive(Debug)]
pub struct BadInput(pub String);

impl fmt::Display for BadInput {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadInput {}

/// Some benchmark cells failed; the report was still written. Exits with 1.
#[derive(Debug)]
pub struct CellsFailed(pub usize);

impl fmt::Display for CellsFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} benchmark cell(s) failed; see the status column", self.0)
    }
}

impl std::error::Error for CellsFailed {}

fn bad(e: impl fmt::Display) -> anyhow::Error {
    BadInput(e.to_string()).into()
}

/// Maps an error to the process exit code.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<BadInput>().is_some() {
        2
    } else {
        1
    }
}

#[derive(Debug, Parser)]
#[command(name = "hyperembed", version, about = "HD embeddings of n-gram statistics: featurize, train, benchmark")]
pub struct Cli {
    /// Seed for item memories, shuffling and weight initialization.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Repetitions per timed operation; medians are reported.
    #[arg(long, global = true)]
    pub runs: Option<usize>,
    /// Flat `key = value` file; a previous report can be replayed too.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted, except for `embed`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Stopword list, one word per line.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every featurizer × classifier cell and write a CSV report.
    Benchmark(BenchmarkArgs),
    /// Vary the HD dimensionality for one classifier.
    Sweep(SweepArgs),
    /// Write one normalized HD vector per input line.
    Embed(EmbedArgs),
    /// Print the subword tokens of every input line.
    Tokenize(TokenizeArgs),
}

#[derive(Debug, Args, Default)]
pub struct DataArgs {
    /// JSON corpus file, `train/`+`test/` directory, or `synth:<classes>:<per-class>`.
    #[arg(long)]
    pub dataset: Option<String>,
    /// json, dir or synth; inferred from the path by default.
    #[arg(long)]
    pub format: Option<String>,
    /// n-gram orders, e.g. `2-4`.
    #[arg(long)]
    pub ngram_range: Option<String>,
    /// Symbols for subword n-grams: chars or tokens.
    #[arg(long)]
    pub hd_alphabet: Option<String>,
    /// Target BPE vocabulary size, merges included.
    #[arg(long)]
    pub bpe_vocab: Option<usize>,
    /// Memory charge for conventional features: dense or sparse.
    #[arg(long)]
    pub baseline_storage: Option<String>,
    /// Oversample minority training classes (true/false).
    #[arg(long)]
    pub balance: Option<bool>,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Comma-separated featurizers, e.g. `semhash-ngram,hd:512:semhash`.
    #[arg(long)]
    pub features: Option<String>,
    /// Comma-separated classifiers.
    #[arg(long)]
    pub classifiers: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Statistics the HD vectors embed: ngram, semhash, bpe, tf or tfidf.
    #[arg(long)]
    pub base: Option<String>,
    #[arg(long)]
    pub classifier: Option<String>,
    /// Comma-separated ascending dimensions.
    #[arg(long)]
    pub dims: Option<String>,
    /// Emit `dataset,classifier,d,metric,value` rows instead.
    #[arg(long)]
    pub long: bool,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Text file, one document per line.
    pub input: PathBuf,
    /// HD featurizer, e.g. `hd:512:semhash`.
    #[arg(long)]
    pub features: Option<String>,
    #[arg(long)]
    pub ngram_range: Option<String>,
    #[arg(long)]
    pub hd_alphabet: Option<String>,
    /// Target BPE vocabulary size, merges included.
    #[arg(long)]
    pub bpe_vocab: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TokenizeArgs {
    /// Text file, one document per line.
    pub input: PathBuf,
    /// semhash or bpe.
    #[arg(long, default_value = "semhash")]
    pub tokenizer: String,
    /// Use a saved BPE model instead of training on the input.
    #[arg(long)]
    pub bpe_model: Option<PathBuf>,
    /// Save the BPE model trained on the input.
    #[arg(long)]
    pub save_bpe: Option<PathBuf>,
    /// Target BPE vocabulary size, merges included.
    #[arg(long)]
    pub bpe_vocab: Option<usize>,
}

/// Settings from a config file or report header, keyed by long flag name.
#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

const KNOWN_KEYS: &[&str] = &[
    "command",
    "seed",
    "runs",
    "stopwords",
    "dataset",
    "format",
    "ngram-range",
    "hd-alphabet",
    "bpe-vocab",
    "baseline-storage",
    "balance",
    "features",
    "classifiers",
    "base",
    "classifier",
    "dims",
];

impl ConfigFile {
    /// Parses `key = value` lines. `#!` lines (report headers) are read as
    /// settings; other `#` lines are comments. In a report, parsing stops at
    /// the first line that is not a header.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        let mut values = BTreeMap::new();
        let is_report = text.starts_with("#!");
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let body = match line.strip_prefix("#!") {
                Some(rest) => rest.trim(),
                None if is_report => break,
                None if line.is_empty() || line.starts_with('#') => continue,
                None => line,
            };
            let (k, v) = body
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            let key = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(format!("line {}: unknown key {key:?}", i + 1));
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("{}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| bad(format!("{}: {e}", path.display())))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str).filter(|v| !v.is_empty())
    }
}

/// Flag value, else config value, else default, parsed as `T`.
fn pick<T: std::str::FromStr>(flag: Option<T>, file: &ConfigFile, key: &str, default: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    let raw = file.get(key).unwrap_or(default);
    raw.parse::<T>()
        .map_err(|e| bad(format!("invalid {key} {raw:?}: {e}")))
}

fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    let items = raw
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| bad(format!("invalid {what} {s:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if items.is_empty() {
        bail!(BadInput(format!("empty {what} list")));
    }
    Ok(items)
}

/// Everything a run needs, after flags, config file and defaults are merged.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub seed: u64,
    pub runs: usize,
    pub dataset: String,
    pub format: String,
    pub stopwords: Option<PathBuf>,
    pub balance: bool,
    pub featurize: FeaturizeConfig,
    pub train: TrainConfig,
}

impl RunConfig {
    fn resolve(cli: &Cli, data: &DataArgs, file: &ConfigFile) -> Result<Self> {
        let seed = pick(cli.seed, file, "seed", "0")?;
        let runs: usize = pick(cli.runs, file, "runs", "5")?;
        if runs == 0 {
            bail!(BadInput("runs must be at least 1".into()));
        }
        let dataset: String = match data.dataset.clone().or_else(|| file.get("dataset").map(String::from)) {
            Some(d) => d,
            None => bail!(BadInput("no dataset given (use --dataset)".into())),
        };
        let format = match data.format.clone().or_else(|| file.get("format").map(String::from)) {
            Some(f) => f,
            None if dataset.starts_with("synth:") => "synth".into(),
            None if Path::new(&dataset).is_dir() => "dir".into(),
            None => "json".into(),
        };
        let stopwords = cli
            .stopwords
            .clone()
            .or_else(|| file.get("stopwords").map(PathBuf::from));
        let featurize = FeaturizeConfig {
            range: pick(data.ngram_range.as_deref().map(String::from), file, "ngram-range", "2-4")
                .and_then(|s: String| s.parse::<NGramRange>().map_err(bad))?,
            symbols: pick(
                data.hd_alphabet.as_deref().map(str::parse).transpose().map_err(bad)?,
                file,
                "hd-alphabet",
                "chars",
            )?,
            bpe_vocab: pick(data.bpe_vocab, file, "bpe-vocab", "1000")?,
            seed,
            baseline_storage: pick(
                data.baseline_storage
                    .as_deref()
                    .map(str::parse::<BaselineStorage>)
                    .transpose()
                    .map_err(bad)?,
                file,
                "baseline-storage",
                "dense",
            )?,
            stopwords: match &stopwords {
                Some(p) => Some(load_stopwords(p).map_err(bad)?),
                None => None,
            },
        };
        Ok(RunConfig {
            seed,
            runs,
            dataset,
            format,
            stopwords,
            balance: pick(data.balance, file, "balance", "true")?,
            featurize,
            train: TrainConfig {
                seed,
                ..TrainConfig::default()
            },
        })
    }

    /// Settings echoed at the top of every report.
    fn echo(&self, command: &str) -> Vec<(String, String)> {
        let f = &self.featurize;
        [
            ("command", command.to_string()),
            ("dataset", self.dataset.clone()),
            ("format", self.format.clone()),
            ("seed", self.seed.to_string()),
            ("runs", self.runs.to_string()),
            ("ngram-range", f.range.to_string()),
            ("hd-alphabet", f.symbols.to_string()),
            ("bpe-vocab", f.bpe_vocab.to_string()),
            ("baseline-storage", f.baseline_storage.to_string()),
            ("balance", self.balance.to_string()),
            (
                "stopwords",
                self.stopwords
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_default(),
            ),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
    }

    fn load_corpus(&self) -> Result<LabeledCorpus> {
        let corpus = match self.format.as_str() {
            "json" => load_json_corpus(Path::new(&self.dataset)).map_err(bad)?,
            "dir" => load_dir_corpus(Path::new(&self.dataset)).map_err(bad)?,
            "synth" => {
                let spec = self.dataset.strip_prefix("synth:").unwrap_or(&self.dataset);
                let parts: Vec<usize> = spec
                    .split(':')
                    .map(|p| p.parse().map_err(|_| bad(format!("bad synthetic dataset {:?}", self.dataset))))
                    .collect::<Result<_>>()?;
                let [k, n] = parts[..] else {
                    bail!(BadInput(format!(
                        "synthetic dataset must be synth:<classes>:<per-class>, got {:?}",
                        self.dataset
                    )));
                };
                let alphabet: Vec<char> = ('a'..='h').collect();
                synth_corpus(k, n, &alphabet, self.seed).map_err(bad)?
            }
            other => bail!(BadInput(format!("unknown dataset format {other:?}"))),
        };
        for w in &corpus.warnings {
            eprintln!("warning: {w}");
        }
        Ok(if self.balance {
            balance_by_oversampling(&corpus, self.seed)
        } else {
            corpus
        })
    }
}

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn load_file_config(cli: &Cli) -> Result<ConfigFile> {
    match &cli.config {
        Some(p) => ConfigFile::load(p),
        None => Ok(ConfigFile::default()),
    }
}

/// Fixed-width summary for humans.
pub fn render_table(cells: &[BenchCell]) -> String {
    let mut s = format!(
        "{:<18} {:<20} {:>6} {:>8} {:>10} {:>10} {:>12} {:>8} {:>8} {:>8}\n",
        "featurizer", "classifier", "d", "f1_w", "train_s", "test_s", "memory_B", "x_train", "x_test", "x_mem"
    );
    for c in cells {
        if let Some(e) = &c.error {
            s += &format!("{:<18} {:<20} failed: {e}\n", c.featurizer, c.classifier);
            continue;
        }
        let r = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{v:.2}"));
        s += &format!(
            "{:<18} {:<20} {:>6} {:>8.4} {:>10.5} {:>10.5} {:>12} {:>8} {:>8} {:>8}\n",
            c.featurizer,
            c.classifier,
            c.d,
            c.f1_weighted(),
            c.train_s,
            c.test_s,
            c.memory_bytes,
            r(c.ratios.map(|x| x.speedup_train)),
            r(c.ratios.map(|x| x.speedup_test)),
            r(c.ratios.map(|x| x.memory_reduction)),
        );
    }
    s
}

fn emit_report(cli: &Cli, config: &[(String, String)], cells: &[BenchCell]) -> Result<()> {
    let mut out = open_out(cli.out.as_deref())?;
    write_csv(&mut out, config, cells).context("writing report")?;
    out.flush().context("writing report")?;
    eprint!("{}", render_table(cells));
    let failed = cells.iter().filter(|c| !c.is_ok()).count();
    if failed > 0 {
        return Err(CellsFailed(failed).into());
    }
    Ok(())
}

pub fn cmd_benchmark(cli: &Cli, args: &BenchmarkArgs) -> Result<()> {
    let file = load_file_config(cli)?;
    let run = RunConfig::resolve(cli, &args.data, &file)?;
    let features_raw = args
        .features
        .clone()
        .or_else(|| file.get("features").map(String::from))
        .unwrap_or_else(|| "semhash-ngram,hd:512:semhash".into());
    let featurizers: Vec<Featurizer> = parse_list(&features_raw, "featurizer")?;
    let classifiers_raw = args
        .classifiers
        .clone()
        .or_else(|| file.get("classifiers").map(String::from))
        .unwrap_or_else(|| ClassifierKind::ALL.map(|c| c.name()).join(","));
    let classifiers: Vec<ClassifierKind> = parse_list(&classifiers_raw, "classifier")?;

    let corpus = run.load_corpus()?;
    let cells = benchmark(&corpus, &featurizers, &classifiers, &run.featurize, &run.train, run.runs)
        .map_err(bad)?;
    let mut config = run.echo("benchmark");
    config.push((
        "features".into(),
        featurizers.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(","),
    ));
    config.push((
        "classifiers".into(),
        classifiers.iter().map(|c| c.name()).collect::<Vec<_>>().join(","),
    ));
    emit_report(cli, &config, &cells)
}

pub fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let file = load_file_config(cli)?;
    let run = RunConfig::resolve(cli, &args.data, &file)?;
    let base: Base = pick(
        args.base.as_deref().map(str::parse).transpose().map_err(bad)?,
        &file,
        "base",
        "semhash",
    )?;
    let classifier: ClassifierKind = pick(
        args.classifier.as_deref().map(str::parse).transpose().map_err(bad)?,
        &file,
        "classifier",
        "mlp",
    )?;
    let default_dims = SWEEP_DIMS.map(|d| d.to_string()).join(",");
    let dims_raw = args
        .dims
        .clone()
        .or_else(|| file.get("dims").map(String::from))
        .unwrap_or(default_dims);
    let dims: Vec<usize> = parse_list(&dims_raw, "dimension")?;
    if dims.contains(&0) {
        bail!(BadInput("dimensions must be positive".into()));
    }
    if dims.windows(2).any(|w| w[0] >= w[1]) {
        bail!(BadInput("dimensions must be strictly ascending".into()));
    }

    let corpus = run.load_corpus()?;
    let (baseline, rows) = dimension_sweep(&corpus, base, classifier, &dims, &run.featurize, &run.train, run.runs)
        .map_err(bad)?;
    let mut config = run.echo("sweep");
    config.push(("base".into(), base.name().into()));
    config.push(("classifier".into(), classifier.name().into()));
    config.push((
        "dims".into(),
        dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(","),
    ));
    if !args.long {
        let mut cells = vec![baseline];
        cells.extend(rows);
        return emit_report(cli, &config, &cells);
    }
    let mut out = open_out(cli.out.as_deref())?;
    for (k, v) in &config {
        writeln!(out, "#! {k} = {v}")?;
    }
    writeln!(out, "dataset,classifier,d,metric,value")?;
    for c in rows.iter().filter(|c| c.is_ok()) {
        let mut metrics = vec![("f1_weighted", c.f1_weighted().to_string())];
        if let Some(r) = c.ratios {
            metrics.push(("speedup_train", format!("{:.4}", r.speedup_train)));
            metrics.push(("speedup_test", format!("{:.4}", r.speedup_test)));
            metrics.push(("memory_reduction", format!("{:.4}", r.memory_reduction)));
        }
        for (m, v) in metrics {
            writeln!(out, "{},{},{},{m},{v}", c.dataset, c.classifier, c.d)?;
        }
    }
    out.flush()?;
    let failed = rows.iter().filter(|c| !c.is_ok()).count();
    if failed > 0 {
        return Err(CellsFailed(failed).into());
    }
    Ok(())
}

fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = std::fs::read(path).map_err(|e| bad(format!("{}: {e}", path.display())))?;
    Ok(String::from_utf8_lossy(&text).lines().map(String::from).collect())
}

pub fn cmd_embed(cli: &Cli, args: &EmbedArgs) -> Result<()> {
    let file = load_file_config(cli)?;
    let Some(out_path) = cli.out.as_deref() else {
        bail!(BadInput("embed writes a binary file; pass --out".into()));
    };
    let featurizer: Featurizer = pick(
        args.features.as_deref().map(str::parse).transpose().map_err(bad)?,
        &file,
        "features",
        "hd:512:semhash",
    )?;
    let Featurizer::Hd { dim, .. } = featurizer else {
        bail!(BadInput(format!("embed needs an HD featurizer, got {featurizer}")));
    };
    let data = DataArgs {
        dataset: Some(args.input.display().to_string()),
        ngram_range: args.ngram_range.clone(),
        hd_alphabet: args.hd_alphabet.clone(),
        bpe_vocab: args.bpe_vocab,
        ..DataArgs::default()
    };
    let run = RunConfig::resolve(cli, &data, &file)?;
    let lines = read_lines(&args.input)?;
    let corpus = LabeledCorpus {
        name: "input".into(),
        train: lines.iter().map(|l| Sample::new(l.clone(), 0)).collect(),
        test: Vec::new(),
        class_names: vec!["input".into()],
        warnings: Vec::new(),
    };
    let features = featurize(&corpus, featurizer, &run.featurize).map_err(bad)?;

    let mut out = BufWriter::new(
        File::create(out_path).with_context(|| format!("cannot create {}", out_path.display()))?,
    );
    out.write_all(EMBEDDING_MAGIC)?;
    out.write_all(&(dim as u64).to_le_bytes())?;
    out.write_all(&(lines.len() as u64).to_le_bytes())?;
    for row in features.train.rows() {
        for v in row.to_dense(dim) {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()
        .with_context(|| format!("writing {}", out_path.display()))?;
    Ok(())
}

/// Reads a `he-emb v1` file back as (dimension, rows).
pub fn read_embeddings(bytes: &[u8]) -> Result<(usize, Vec<Vec<f64>>)> {
    let body = bytes
        .strip_prefix(EMBEDDING_MAGIC)
        .context("not a he-emb v1 file")?;
    if body.len() < 16 {
        bail!("truncated embedding header");
    }
    let d = u64::from_le_bytes(body[..8].try_into()?) as usize;
    let n = u64::from_le_bytes(body[8..16].try_into()?) as usize;
    let data = &body[16..];
    if data.len() != d * n * 8 {
        bail!("embedding payload has {} bytes, expected {}", data.len(), d * n * 8);
    }
    let values: Vec<f64> = data
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((d, values.chunks(d.max(1)).take(n).map(<[f64]>::to_vec).collect()))
}

pub fn cmd_tokenize(cli: &Cli, args: &TokenizeArgs) -> Result<()> {
    let stop = match &cli.stopwords {
        Some(p) => Some(load_stopwords(p).map_err(bad)?),
        None => None,
    };
    let lines: Vec<String> = read_lines(&args.input)?
        .iter()
        .map(|l| preprocess(l, stop.as_ref()))
        .collect();
    let tokens: Vec<Vec<String>> = match args.tokenizer.as_str() {
        "semhash" => lines.iter().map(|l| semhash_tokens(l)).collect(),
        "bpe" => {
            let model = match &args.bpe_model {
                Some(p) => BpeModel::load(p).map_err(bad)?,
                None => BpeModel::train(&lines, args.bpe_vocab.unwrap_or(1000)).map_err(bad)?,
            };
            if let Some(p) = &args.save_bpe {
                model.save(p)?;
            }
            lines.iter().map(|l| model.encode(l)).collect()
        }
        other => bail!(BadInput(format!("unknown tokenizer {other:?} (semhash or bpe)"))),
    };
    let mut out = open_out(cli.out.as_deref())?;
    for t in tokens {
        writeln!(out, "{}", t.join(" "))?;
    }
    out.flush()?;
    Ok(())
}

pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Benchmark(a) => cmd_benchmark(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Embed(a) => cmd_embed(cli, a),
        Command::Tokenize(a) => cmd_tokenize(cli, a),
    }
}
