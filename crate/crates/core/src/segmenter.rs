//! Sliding-window segmentation.
//!
//! A window of `W` words slides over the stream with a fixed stride. Every
//! window is classified once, so each word collects one vote per covering
//! window. A label is accepted at a word when its share of those votes is
//! strictly greater than `theta`; accepting a label from the segmenter set
//! ends a segment after that word.
//!
//! ```
//! use fullstop::classifier::ConstantClassifier;
//! use fullstop::segmenter::{segment, SegmenterConfig};
//! use fullstop::sepp::PunctLabel;
//!
//! let words: Vec<String> = "zo komen wij".split(' ').map(String::from).collect();
//! let out = segment(&words, &ConstantClassifier(PunctLabel::None), &SegmenterConfig::default()).unwrap();
//! assert_eq!(out.render(), "zo komen wij\n");
//! ```

use std::fmt;
use std::ops::Range;
use std::str::FromStr;

use rayon::prelude::*;
use thiserror::Error;

use crate::classifier::{Classifier, ClassifyError};
use crate::sepp::{LabeledToken, PunctLabel, SeppDocument};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("empty word stream")]
    EmptyStream,
    #[error("invalid segmenter configuration: {0}")]
    Config(String),
    #[error("window starting at word {window_start}: {source}")]
    Classifier {
        window_start: usize,
        #[source]
        source: ClassifyError,
    },
}

/// A set of punctuation labels, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct LabelSet(u8);

impl LabelSet {
    pub const fn empty() -> Self {
        LabelSet(0)
    }

    pub fn of(labels: &[PunctLabel]) -> Self {
        let mut s = LabelSet::empty();
        for &l in labels {
            s.insert(l);
        }
        s
    }

    pub fn insert(&mut self, label: PunctLabel) {
        self.0 |= 1 << label.index();
    }

    #[inline]
    pub fn contains(self, label: PunctLabel) -> bool {
        self.0 & (1 << label.index()) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = PunctLabel> {
        PunctLabel::ALL.into_iter().filter(move |l| self.contains(*l))
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LabelSet({self})")
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in self.iter() {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for LabelSet {
    type Err = String;

    /// Label characters, e.g. `".?"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut set = LabelSet::empty();
        for c in s.chars() {
            if c.is_whitespace() {
                continue;
            }
            let l = PunctLabel::from_char(c).ok_or_else(|| format!("unknown label {c:?}"))?;
            set.insert(l);
        }
        Ok(set)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pooling {
    /// Each label is thresholded on its own vote share.
    PerClass,
    /// The segmenter labels are thresholded on their summed vote share.
    Pooled,
}

impl FromStr for Pooling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "per_class" | "perclass" => Ok(Pooling::PerClass),
            "pooled" => Ok(Pooling::Pooled),
            other => Err(format!("unknown pooling mode {other:?} (expected per_class or pooled)")),
        }
    }
}

impl fmt::Display for Pooling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Pooling::PerClass => "per_class",
            Pooling::Pooled => "pooled",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmenterConfig {
    pub window_words: usize,
    pub stride: usize,
    pub theta: f64,
    pub segmenters: LabelSet,
    pub pooling: Pooling,
    /// Upper bound on words per classifier call.
    pub chunk_token_budget: usize,
}

impl Default for SegmenterConfig {
    fn default() -> Self {
        SegmenterConfig {
            window_words: 200,
            stride: 1,
            theta: 0.1,
            segmenters: LabelSet::of(&[PunctLabel::Period, PunctLabel::Question]),
            pooling: Pooling::PerClass,
            chunk_token_budget: 512,
        }
    }
}

impl SegmenterConfig {
    pub fn validate(&self) -> Result<(), SegmentError> {
        let bad = |m: String| Err(SegmentError::Config(m));
        if self.window_words == 0 {
            return bad("window must be positive".into());
        }
        if self.stride == 0 || self.stride > self.window_words {
            return bad(format!("stride must lie in 1..={}, got {}", self.window_words, self.stride));
        }
        if !(0.0..=1.0).contains(&self.theta) {
            return bad(format!("theta must lie in [0, 1], got {}", self.theta));
        }
        if self.segmenters.is_empty() || self.segmenters.contains(PunctLabel::None) {
            return bad("segmenter set must be non-empty and exclude 0".into());
        }
        if self.chunk_token_budget == 0 {
            return bad("chunk token budget must be positive".into());
        }
        Ok(())
    }
}

/// Window spans: starts `0, stride, 2*stride, ...` up to `max(0, n - W)`,
/// each `min(W, n)` words long.
///
/// With a stride above 1 the last words may be left uncovered when
/// `n - W` is not a multiple of the stride.
pub fn windows(n: usize, cfg: &SegmenterConfig) -> Result<Vec<Range<usize>>, SegmentError> {
    cfg.validate()?;
    if n == 0 {
        return Err(SegmentError::EmptyStream);
    }
    let len = cfg.window_words.min(n);
    let last = n - len;
    Ok((0..=last).step_by(cfg.stride).map(|s| s..s + len).collect())
}

/// Per-word label votes collected from every covering window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteTable {
    counts: Vec<[u32; PunctLabel::COUNT]>,
    coverage: Vec<u32>,
}

impl VoteTable {
    pub fn new(n: usize) -> Self {
        VoteTable { counts: vec![[0; PunctLabel::COUNT]; n], coverage: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.coverage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coverage.is_empty()
    }

    pub fn counts(&self, i: usize) -> &[u32; PunctLabel::COUNT] {
        &self.counts[i]
    }

    pub fn count(&self, i: usize, label: PunctLabel) -> u32 {
        self.counts[i][label.index()]
    }

    pub fn coverage(&self, i: usize) -> u32 {
        self.coverage[i]
    }

    /// Records one window's labels starting at word `start`.
    pub fn add(&mut self, start: usize, labels: &[PunctLabel]) {
        for (i, l) in labels.iter().enumerate() {
            self.counts[start + i][l.index()] += 1;
            self.coverage[start + i] += 1;
        }
    }

    /// Adds `other`, whose word 0 is word `offset` of `self`.
    pub fn merge_at(&mut self, offset: usize, other: &VoteTable) {
        for i in 0..other.len() {
            for l in 0..PunctLabel::COUNT {
                self.counts[offset + i][l] += other.counts[i][l];
            }
            self.coverage[offset + i] += other.coverage[i];
        }
    }

    /// Vote share of `label` at word `i`; 0 when the word is uncovered.
    pub fn ratio(&self, i: usize, label: PunctLabel) -> f64 {
        match self.coverage[i] {
            0 => 0.0,
            cov => self.counts[i][label.index()] as f64 / cov as f64,
        }
    }
}

// Windows handed to one parallel task.
const WINDOWS_PER_TASK: usize = 64;

fn classify_window<C: Classifier + ?Sized>(
    stream: &[String],
    offset: usize,
    span: Range<usize>,
    classifier: &C,
    chunk: usize,
) -> Result<Vec<PunctLabel>, SegmentError> {
    let mut labels = Vec::with_capacity(span.len());
    let mut start = span.start;
    while start < span.end {
        let end = (start + chunk).min(span.end);
        let part = &stream[start..end];
        let out = classifier
            .classify_span(offset + start, part)
            .map_err(|source| SegmentError::Classifier { window_start: span.start, source })?;
        if out.len() != part.len() {
            return Err(SegmentError::Classifier {
                window_start: span.start,
                source: ClassifyError::LengthMismatch { expected: part.len(), got: out.len() },
            });
        }
        labels.extend(out);
        start = end;
    }
    Ok(labels)
}

/// Classifies every window and tallies the votes.
pub fn accumulate_votes<C: Classifier + ?Sized>(
    stream: &[String],
    classifier: &C,
    cfg: &SegmenterConfig,
) -> Result<VoteTable, SegmentError> {
    accumulate_votes_at(stream, 0, classifier, cfg)
}

/// Like [`accumulate_votes`], for a stream that begins at word `offset` of
/// the stream the classifier was built for.
pub fn accumulate_votes_at<C: Classifier + ?Sized>(
    stream: &[String],
    offset: usize,
    classifier: &C,
    cfg: &SegmenterConfig,
) -> Result<VoteTable, SegmentError> {
    let spans = windows(stream.len(), cfg)?;
    let chunk = classifier
        .max_window_words()
        .unwrap_or(usize::MAX)
        .min(cfg.window_words)
        .min(cfg.chunk_token_budget)
        .max(1);

    // Each task tallies a contiguous run of windows into a local table; the
    // partial tables are added in order.
    let partials: Vec<(usize, VoteTable)> = spans
        .par_chunks(WINDOWS_PER_TASK)
        .map(|group| {
            let lo = group[0].start;
            let hi = group.last().expect("non-empty group").end;
            let mut local = VoteTable::new(hi - lo);
            for span in group {
                let labels = classify_window(stream, offset, span.clone(), classifier, chunk)?;
                local.add(span.start - lo, &labels);
            }
            Ok((lo, local))
        })
        .collect::<Result<_, SegmentError>>()?;

    let mut table = VoteTable::new(stream.len());
    for (lo, local) in &partials {
        table.merge_at(*lo, local);
    }
    Ok(table)
}

/// Final label for one word from its votes.
pub fn decide_word(
    counts: &[u32; PunctLabel::COUNT],
    coverage: u32,
    theta: f64,
    segmenters: LabelSet,
    pooling: Pooling,
) -> PunctLabel {
    if coverage == 0 {
        return PunctLabel::None;
    }
    let cov = coverage as f64;
    let mut best: Option<(PunctLabel, f64)> = None;
    let mut offer = |label: PunctLabel, ratio: f64| {
        // Candidates arrive in label order, so strict `>` keeps the earlier label on ties.
        if ratio > theta && best.map_or(true, |(_, r)| ratio > r) {
            best = Some((label, ratio));
        }
    };
    match pooling {
        Pooling::PerClass => {
            for l in &PunctLabel::ALL[1..] {
                offer(*l, counts[l.index()] as f64 / cov);
            }
        }
        Pooling::Pooled => {
            let pooled: u32 = segmenters.iter().map(|s| counts[s.index()]).sum();
            let boundary = segmenters
                .iter()
                .fold(None::<PunctLabel>, |b, s| match b {
                    Some(b) if counts[b.index()] >= counts[s.index()] => Some(b),
                    _ => Some(s),
                })
                .expect("segmenter set is non-empty");
            for l in &PunctLabel::ALL[1..] {
                if segmenters.contains(*l) {
                    if *l == boundary {
                        offer(*l, pooled as f64 / cov);
                    }
                } else {
                    offer(*l, counts[l.index()] as f64 / cov);
                }
            }
        }
    }
    best.map_or(PunctLabel::None, |(l, _)| l)
}

/// Accepted labels and segment boundaries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decision {
    pub labels: Vec<PunctLabel>,
    /// Word indices after which a segment ends, ascending.
    pub boundaries: Vec<usize>,
}

impl Decision {
    /// Positions that received any punctuation.
    pub fn accepted(&self) -> Vec<usize> {
        self.labels.iter().enumerate().filter(|(_, l)| !l.is_none()).map(|(i, _)| i).collect()
    }
}

pub fn decide(votes: &VoteTable, cfg: &SegmenterConfig) -> Decision {
    let labels: Vec<PunctLabel> = (0..votes.len())
        .map(|i| decide_word(&votes.counts[i], votes.coverage[i], cfg.theta, cfg.segmenters, cfg.pooling))
        .collect();
    let boundaries = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| cfg.segmenters.contains(**l))
        .map(|(i, _)| i)
        .collect();
    Decision { labels, boundaries }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub words: Vec<String>,
    /// Accepted label per word; the last one ends the segment unless it is open.
    pub labels: Vec<PunctLabel>,
    /// False for the trailing segment that no boundary closed.
    pub closed: bool,
}

impl Segment {
    pub fn terminal(&self) -> Option<PunctLabel> {
        if self.closed {
            self.labels.last().copied()
        } else {
            None
        }
    }

    /// Words joined by spaces, punctuation attached to its word.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, (w, l)) in self.words.iter().zip(&self.labels).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push_str(w);
            if !l.is_none() {
                out.push(l.as_char());
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SegmentedText {
    pub segments: Vec<Segment>,
}

impl SegmentedText {
    /// Cuts `stream` after every boundary of `decision`.
    pub fn from_decision(stream: &[String], decision: &Decision) -> Self {
        let mut segments = Vec::new();
        let mut start = 0;
        for &b in &decision.boundaries {
            segments.push(Segment {
                words: stream[start..=b].to_vec(),
                labels: decision.labels[start..=b].to_vec(),
                closed: true,
            });
            start = b + 1;
        }
        if start < stream.len() {
            segments.push(Segment {
                words: stream[start..].to_vec(),
                labels: decision.labels[start..].to_vec(),
                closed: false,
            });
        }
        SegmentedText { segments }
    }

    pub fn words(&self) -> Vec<&str> {
        self.segments.iter().flat_map(|s| s.words.iter().map(String::as_str)).collect()
    }

    pub fn labels(&self) -> Vec<PunctLabel> {
        self.segments.iter().flat_map(|s| s.labels.iter().copied()).collect()
    }

    /// One segment per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for s in &self.segments {
            out.push_str(&s.render());
            out.push('\n');
        }
        out
    }

    /// Predicted labels as a SEPP document; boundaries set the flag column.
    pub fn to_sepp(&self) -> SeppDocument {
        let mut doc = SeppDocument::default();
        for seg in &self.segments {
            let last = seg.words.len() - 1;
            for (i, (w, l)) in seg.words.iter().zip(&seg.labels).enumerate() {
                let eos = *l == PunctLabel::Period || (seg.closed && i == last);
                doc.push(LabeledToken::new(w.clone(), eos, *l).expect("stream words are valid SEPP words"));
            }
        }
        doc
    }
}

/// Windows, votes, decision, segments.
pub fn segment<C: Classifier + ?Sized>(
    stream: &[String],
    classifier: &C,
    cfg: &SegmenterConfig,
) -> Result<SegmentedText, SegmentError> {
    let votes = accumulate_votes(stream, classifier, cfg)?;
    Ok(SegmentedText::from_decision(stream, &decide(&votes, cfg)))
}
