use std::time::Instant;

/// Wall-clock samples of a repeated operation, in seconds.
#[derive(Debug, Clone, PartialEq)]
pub struct Timing {
    pub samples: Vec<f64>,
    pub median: f64,
    pub min: f64,
    pub max: f64,
}

impl Timing {
    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        assert!(!samples.is_empty(), "timing needs at least one sample");
        let mut sorted = samples.clone();
        sorted.sort_by(f64::total_cmp);
        let m = sorted.len();
        let median = if m % 2 == 1 {
            sorted[m / 2]
        } else {
            0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
        };
        samples.shrink_to_fit();
        Timing {
            median,
            min: sorted[0],
            max: sorted[m - 1],
            samples,
        }
    }
}

/// Runs `op` `repetitions` times (at least once) and keeps the first result.
pub fn time_repeated<T>(repetitions: usize, mut op: impl FnMut() -> T) -> (T, Timing) {
    let mut samples = Vec::with_capacity(repetitions.max(1));
    let mut first = None;
    for _ in 0..repetitions.max(1) {
        let start = Instant::now();
        let out = op();
        samples.push(start.elapsed().as_secs_f64());
        first.get_or_insert(out);
    }
    (first.expect("ran at least once"), Timing::from_samples(samples))
}

pub fn time_op(repetitions: usize, mut op: impl FnMut()) -> Timing {
    time_repeated(repetitions, || op()).1
}
