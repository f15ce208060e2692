//! Evaluation: label confusion and per-class scores, boundary scoring,
//! per-file score distributions and paired significance tests.

mod boundary;
mod distribution;
mod report;
mod significance;

pub use boundary::{boundaries_from_labels, boundary_score, BoundaryScore};
pub use distribution::{ci_ranks, split_testfiles, summarize, summarize_with, DistributionSummary, StdDev};
pub use report::{f1_score, report, ClassMetrics, ConfusionMatrix, EvalReport, DISPLAY_ORDER};
pub use significance::{exhaustive_limit, paired_significance, Resampling};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricsError {
    #[error("sequences differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("boundary index {index} outside stream of {len} words")]
    OutOfRange { index: usize, len: usize },
    #[error("corpus has {found} sentences, fewer than the block size {needed}")]
    TooShort { found: usize, needed: usize },
    #[error("no scores to summarize")]
    Empty,
    #[error("need at least {needed} paired scores, found {found}")]
    TooFewPairs { found: usize, needed: usize },
    #[error("block size must be positive")]
    ZeroBlock,
}
