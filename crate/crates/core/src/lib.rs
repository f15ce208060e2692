//! Punctuation restoration and sentence segmentation for unpunctuated word
//! streams, such as the output of a speech recognizer.
//!
//! A per-token classifier predicts the mark following every word. The
//! [`segmenter`] runs it over a sliding window, lets every covering window
//! vote, and accepts a mark when its vote share exceeds a threshold. Marks
//! from the segmenter set (by default `.` and `?`) end a segment.
//!
//! Around that core sit the corpus tools ([`sepp`], [`textprep`]), the
//! classifiers ([`classifier`]) and evaluation ([`metrics`]). The
//! [`cli`] module backs the `fullstop` binary.

pub mod classifier;
pub mod cli;
pub mod io;
pub mod metrics;
pub mod segmenter;
pub mod sepp;
pub mod textprep;

pub use classifier::{Classifier, LinearModel};
pub use segmenter::{segment, LabelSet, Pooling, SegmentedText, SegmenterConfig};
pub use sepp::{LabeledToken, PunctLabel, SeppDocument};
