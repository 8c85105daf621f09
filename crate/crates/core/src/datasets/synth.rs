use rand::Rng as _;

use super::{LabeledCorpus, Sample};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, seeded, Rng};

const MIN_LEN: usize = 40;
const MAX_LEN: usize = 80;
const SPACE_PROB: f64 = 0.15;

/// Generates a corpus whose classes are distinct first-order Markov chains
/// over `alphabet`.
///
/// Every class gets a random transition table whose rows are sharpened by
/// raising uniform draws to the fourth power, so classes differ mostly in
/// their frequent short substrings. Words are separated by single spaces.
/// Train and test splits each hold `samples_per_class` documents per class.
pub fn synth_corpus(
    n_classes: usize,
    samples_per_class: usize,
    alphabet: &[char],
    seed: u64,
) -> Result<LabeledCorpus> {
    if n_classes == 0 || samples_per_class == 0 {
        return Err(Error::invalid("synthetic corpus needs classes and samples"));
    }
    if alphabet.len() < 2 {
        return Err(Error::invalid("synthetic alphabet needs at least two symbols"));
    }
    let a = alphabet.len();
    let chains: Vec<Vec<Vec<f64>>> = (0..n_classes)
        .map(|c| {
            let mut rng = seeded(derive_seed(seed, c as u64));
            (0..a)
                .map(|_| {
                    let row: Vec<f64> = (0..a).map(|_| rng.random::<f64>().powi(4)).collect();
                    let total: f64 = row.iter().sum();
                    row.into_iter().map(|w| w / total).collect()
                })
                .collect()
        })
        .collect();

    let mut rng = seeded(derive_seed(seed, u64::MAX));
    let split = |rng: &mut Rng| {
        let mut out = Vec::with_capacity(n_classes * samples_per_class);
        for (label, chain) in chains.iter().enumerate() {
            for _ in 0..samples_per_class {
                out.push(Sample::new(generate(chain, alphabet, rng), label));
            }
        }
        out
    };
    let train = split(&mut rng);
    let test = split(&mut rng);
    Ok(LabeledCorpus {
        name: format!("synth-{n_classes}x{samples_per_class}"),
        train,
        test,
        class_names: (0..n_classes).map(|c| format!("class{c}")).collect(),
        warnings: Vec::new(),
    })
}

fn generate(chain: &[Vec<f64>], alphabet: &[char], rng: &mut Rng) -> String {
    let len = rng.random_range(MIN_LEN..=MAX_LEN);
    let mut state = rng.random_range(0..alphabet.len());
    let mut text = String::with_capacity(len + len / 4);
    text.push(alphabet[state]);
    for i in 1..len {
        if i + 1 < len && !text.ends_with(' ') && rng.random_bool(SPACE_PROB) {
            text.push(' ');
        }
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let row = &chain[state];
        state = row.len() - 1;
        for (j, p) in row.iter().enumerate() {
            acc += p;
            if u < acc {
                state = j;
                break;
            }
        }
        text.push(alphabet[state]);
    }
    text
}
