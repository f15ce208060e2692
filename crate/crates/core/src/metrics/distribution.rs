use super::MetricsError;
use crate::sepp::SeppDocument;

/// Cuts a corpus into consecutive test files of exactly `sentences_per_file`
/// sentences; the remainder is dropped.
pub fn split_testfiles(corpus: &SeppDocument, sentences_per_file: usize) -> Result<Vec<SeppDocument>, MetricsError> {
    if sentences_per_file == 0 {
        return Err(MetricsError::ZeroBlock);
    }
    let sentences = corpus.sentences();
    if sentences.len() < sentences_per_file {
        return Err(MetricsError::TooShort { found: sentences.len(), needed: sentences_per_file });
    }
    Ok(sentences
        .chunks_exact(sentences_per_file)
        .enumerate()
        .map(|(i, block)| {
            let doc = SeppDocument::new(block.iter().flat_map(|s| s.iter().cloned()).collect());
            match corpus.source_id() {
                Some(id) => doc.with_source_id(format!("{id}#{i}")),
                None => doc,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StdDev {
    /// Divide by `n`.
    Population,
    /// Divide by `n - 1`.
    Sample,
}

/// 1-based ranks of the 95% interval ends in ascending order:
/// `floor(0.025 n) + 1` and `ceil(0.975 n)`.
pub fn ci_ranks(n: usize) -> (usize, usize) {
    let lo = 25 * n / 1000 + 1;
    let hi = (975 * n).div_ceil(1000);
    (lo.min(n), hi.max(1))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSummary {
    pub n: usize,
    pub median: f64,
    pub average: f64,
    pub stddev: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_low_rank: usize,
    pub ci_high_rank: usize,
}

impl DistributionSummary {
    pub const TSV_HEADER: &'static str = "condition\tn\tmedian\taverage\tstddev\tci_lo\tci_hi";

    pub fn tsv_row(&self, condition: &str) -> String {
        format!(
            "{condition}\t{}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            self.n, self.median, self.average, self.stddev, self.ci_low, self.ci_high
        )
    }
}

pub fn summarize(scores: &[f64]) -> Result<DistributionSummary, MetricsError> {
    summarize_with(scores, StdDev::Population)
}

pub fn summarize_with(scores: &[f64], kind: StdDev) -> Result<DistributionSummary, MetricsError> {
    let n = scores.len();
    if n == 0 {
        return Err(MetricsError::Empty);
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    };
    let average = sorted.iter().sum::<f64>() / n as f64;
    let ss: f64 = sorted.iter().map(|x| (x - average).powi(2)).sum();
    let denom = match kind {
        StdDev::Population => n as f64,
        StdDev::Sample if n > 1 => (n - 1) as f64,
        StdDev::Sample => 1.0,
    };
    let (lo, hi) = ci_ranks(n);
    Ok(DistributionSummary {
        n,
        median,
        average,
        stddev: (ss / denom).sqrt(),
        ci_low: sorted[lo - 1],
        ci_high: sorted[hi - 1],
        ci_low_rank: lo,
        ci_high_rank: hi,
    })
}
