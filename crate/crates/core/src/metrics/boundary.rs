use std::collections::BTreeSet;

use super::report::f1_score;
use super::MetricsError;
use crate::segmenter::LabelSet;
use crate::sepp::PunctLabel;

/// Exact-position boundary scores.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundaryScore {
    pub true_positives: u64,
    pub false_positives: u64,
    pub false_negatives: u64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl BoundaryScore {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64) -> Self {
        let ratio = |num: u64, den: u64| if den == 0 { 0.0 } else { num as f64 / den as f64 };
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        BoundaryScore {
            true_positives: tp,
            false_positives: fp,
            false_negatives: fn_,
            precision,
            recall,
            f1: f1_score(precision, recall),
        }
    }
}

/// Positions whose label belongs to `segmenters`.
pub fn boundaries_from_labels(labels: &[PunctLabel], segmenters: LabelSet) -> Vec<usize> {
    labels.iter().enumerate().filter(|(_, l)| segmenters.contains(**l)).map(|(i, _)| i).collect()
}

/// Scores predicted boundary indices against gold ones over a stream of
/// `len` words.
pub fn boundary_score(gold: &[usize], pred: &[usize], len: usize) -> Result<BoundaryScore, MetricsError> {
    if let Some(&index) = gold.iter().chain(pred).find(|&&i| i >= len) {
        return Err(MetricsError::OutOfRange { index, len });
    }
    let gold: BTreeSet<usize> = gold.iter().copied().collect();
    let pred: BTreeSet<usize> = pred.iter().copied().collect();
    let tp = gold.intersection(&pred).count() as u64;
    Ok(BoundaryScore::from_counts(tp, pred.len() as u64 - tp, gold.len() as u64 - tp))
}
