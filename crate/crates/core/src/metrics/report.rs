use std::fmt::Write as _;

use super::MetricsError;
use crate::sepp::PunctLabel;

const N: usize = PunctLabel::COUNT;

/// Row order of printed reports: `0 . , ? - :`.
pub const DISPLAY_ORDER: [PunctLabel; N] = [
    PunctLabel::None,
    PunctLabel::Period,
    PunctLabel::Comma,
    PunctLabel::Question,
    PunctLabel::Dash,
    PunctLabel::Colon,
];

/// Counts indexed `[gold][predicted]`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConfusionMatrix {
    counts: [[u64; N]; N],
}

impl ConfusionMatrix {
    pub fn from_counts(counts: [[u64; N]; N]) -> Self {
        ConfusionMatrix { counts }
    }

    pub fn compute(gold: &[PunctLabel], pred: &[PunctLabel]) -> Result<Self, MetricsError> {
        if gold.len() != pred.len() {
            return Err(MetricsError::LengthMismatch(gold.len(), pred.len()));
        }
        let mut cm = ConfusionMatrix::default();
        for (g, p) in gold.iter().zip(pred) {
            cm.counts[g.index()][p.index()] += 1;
        }
        Ok(cm)
    }

    pub fn get(&self, gold: PunctLabel, pred: PunctLabel) -> u64 {
        self.counts[gold.index()][pred.index()]
    }

    pub fn counts(&self) -> &[[u64; N]; N] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn correct(&self) -> u64 {
        (0..N).map(|i| self.counts[i][i]).sum()
    }

    pub fn add(&mut self, other: &ConfusionMatrix) {
        for g in 0..N {
            for p in 0..N {
                self.counts[g][p] += other.counts[g][p];
            }
        }
    }

    /// TSV with a header row and column of label characters.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("gold\\pred");
        for p in DISPLAY_ORDER {
            write!(out, "\t{}", p.as_char()).unwrap();
        }
        out.push('\n');
        for g in DISPLAY_ORDER {
            out.push(g.as_char());
            for p in DISPLAY_ORDER {
                write!(out, "\t{}", self.get(g, p)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// `2PR / (P + R)`, or 0 when both are 0.
pub fn f1_score(precision: f64, recall: f64) -> f64 {
    if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
    /// Nothing was predicted as this class; precision was set to 0.
    pub precision_undefined: bool,
    /// The class never occurs in the gold labels; recall was set to 0.
    pub recall_undefined: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Indexed by [`PunctLabel::index`].
    pub per_class: [ClassMetrics; N],
    pub accuracy: f64,
    pub micro_f1: f64,
    pub macro_precision: f64,
    pub macro_recall: f64,
    pub macro_f1: f64,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub total: u64,
}

impl EvalReport {
    pub fn class(&self, label: PunctLabel) -> &ClassMetrics {
        &self.per_class[label.index()]
    }

    /// `class\tprecision\trecall\tf1\tsupport`, one row per class then the aggregates.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("class\tprecision\trecall\tf1\tsupport\n");
        for l in DISPLAY_ORDER {
            let c = self.class(l);
            writeln!(out, "{}\t{:.6}\t{:.6}\t{:.6}\t{}", l.as_char(), c.precision, c.recall, c.f1, c.support)
                .unwrap();
        }
        writeln!(out, "accuracy\t\t\t{:.6}\t{}", self.accuracy, self.total).unwrap();
        writeln!(
            out,
            "macro avg\t{:.6}\t{:.6}\t{:.6}\t{}",
            self.macro_precision, self.macro_recall, self.macro_f1, self.total
        )
        .unwrap();
        writeln!(
            out,
            "weighted avg\t{:.6}\t{:.6}\t{:.6}\t{}",
            self.weighted_precision, self.weighted_recall, self.weighted_f1, self.total
        )
        .unwrap();
        out
    }

    /// Aligned plain-text table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{:>12} {:>10} {:>10} {:>10} {:>10}", "class", "precision", "recall", "f1-score", "samples")
            .unwrap();
        for l in DISPLAY_ORDER {
            let c = self.class(l);
            writeln!(
                out,
                "{:>12} {:>10.6} {:>10.6} {:>10.6} {:>10}",
                l.as_char(),
                c.precision,
                c.recall,
                c.f1,
                c.support
            )
            .unwrap();
        }
        writeln!(out).unwrap();
        writeln!(out, "{:>12} {:>10} {:>10} {:>10.6} {:>10}", "accuracy", "", "", self.accuracy, self.total).unwrap();
        for (name, p, r, f) in [
            ("macro avg", self.macro_precision, self.macro_recall, self.macro_f1),
            ("weighted avg", self.weighted_precision, self.weighted_recall, self.weighted_f1),
        ] {
            writeln!(out, "{name:>12} {p:>10.6} {r:>10.6} {f:>10.6} {:>10}", self.total).unwrap();
        }
        out
    }
}

pub fn report(cm: &ConfusionMatrix) -> Result<EvalReport, MetricsError> {
    let total = cm.total();
    if total == 0 {
        return Err(MetricsError::EmptyMatrix);
    }
    let mut per_class = [ClassMetrics::default(); N];
    for (k, m) in per_class.iter_mut().enumerate() {
        let tp = cm.counts[k][k];
        let predicted: u64 = (0..N).map(|g| cm.counts[g][k]).sum();
        let support: u64 = cm.counts[k].iter().sum();
        m.support = support;
        m.precision_undefined = predicted == 0;
        m.recall_undefined = support == 0;
        m.precision = if predicted > 0 { tp as f64 / predicted as f64 } else { 0.0 };
        m.recall = if support > 0 { tp as f64 / support as f64 } else { 0.0 };
        m.f1 = f1_score(m.precision, m.recall);
    }
    let mean = |f: fn(&ClassMetrics) -> f64| per_class.iter().map(f).sum::<f64>() / N as f64;
    let weighted =
        |f: fn(&ClassMetrics) -> f64| per_class.iter().map(|m| f(m) * m.support as f64).sum::<f64>() / total as f64;
    let accuracy = cm.correct() as f64 / total as f64;

    Ok(EvalReport {
        per_class,
        accuracy,
        // Every token gets exactly one gold and one predicted label, so micro
        // precision, micro recall and accuracy share numerator and denominator.
        micro_f1: accuracy,
        macro_precision: mean(|m| m.precision),
        macro_recall: mean(|m| m.recall),
        macro_f1: mean(|m| m.f1),
        weighted_precision: weighted(|m| m.precision),
        weighted_recall: weighted(|m| m.recall),
        weighted_f1: weighted(|m| m.f1),
        total,
    })
}
