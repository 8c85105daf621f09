//! Scores, timings and the byte-exact memory model behind the benchmark.

mod f1;
mod memory;
mod report;
mod timing;

pub use f1::{f1_scores, F1Scores};
pub use memory::MemoryModel;
pub use report::{relative_report, write_csv, BenchCell, Ratios, CSV_HEADER};
pub use timing::{time_op, time_repeated, Timing};
