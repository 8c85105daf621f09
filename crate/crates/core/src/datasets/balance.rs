use rand::seq::SliceRandom;

use super::{LabeledCorpus, Sample};
use crate::rng::seeded;

/// Oversamples every minority class of the training split up to the size of
/// the largest class.
///
/// Each minority class is shuffled once with the seeded stream and its
/// samples are appended cyclically from that order. The test split is left
/// untouched.
pub fn balance_by_oversampling(corpus: &LabeledCorpus, seed: u64) -> LabeledCorpus {
    let counts = corpus.train_counts();
    let target = counts.iter().copied().max().unwrap_or(0);
    let mut rng = seeded(seed);
    let mut out = corpus.clone();
    for (class, &have) in counts.iter().enumerate() {
        if have == 0 || have == target {
            continue;
        }
        let mut members: Vec<&Sample> = corpus.train.iter().filter(|s| s.label == class).collect();
        members.shuffle(&mut rng);
        out.train
            .extend(members.iter().cycle().take(target - have).map(|s| (*s).clone()));
    }
    out
}
