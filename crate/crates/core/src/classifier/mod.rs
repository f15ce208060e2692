//! Per-token punctuation classifiers.
//!
//! A classifier maps a window of words to one label per word: the mark that
//! follows that word. Three implementations ship with the crate:
//!
//! * [`LinearModel`], an averaged perceptron over hashed features;
//! * [`ExternalClassifier`], a child process speaking a line protocol;
//! * [`ReplayClassifier`], which returns labels recorded in a SEPP file.

mod external;
mod perceptron;
mod replay;

pub use external::{ExternalAdapterConfig, ExternalClassifier};
pub use perceptron::{
    feature_hash, load_model, read_model, save_model, train_reference, write_model, LinearModel,
    ModelFileError, TrainOptions, FEATURE_BITS, MODEL_MAGIC, MODEL_VERSION, TEMPLATE_VERSION,
};
pub use replay::ReplayClassifier;

use thiserror::Error;

use crate::sepp::PunctLabel;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("empty window")]
    EmptyWindow,
    #[error("empty training set")]
    EmptyTrainingSet,
    #[error("classifier returned {got} labels for {expected} words")]
    LengthMismatch { expected: usize, got: usize },
    #[error("classifier returned unknown label {0:?}")]
    BadLabel(String),
    #[error("word {0:?} cannot be sent over the line protocol")]
    BadWord(String),
    #[error("no response within {0:?}")]
    Timeout(std::time::Duration),
    #[error("external classifier died: {0}")]
    ProcessDied(String),
    #[error("replay mismatch at word {index}: expected {expected:?}, got {got:?}")]
    ReplayMismatch { index: usize, expected: String, got: String },
    #[error("replay window {start}..{end} exceeds recorded stream of {len} words")]
    ReplayOutOfRange { start: usize, end: usize, len: usize },
}

/// The per-token classification contract.
///
/// Implementations must return exactly one label per input word and must be
/// deterministic.
pub trait Classifier: Send + Sync {
    fn name(&self) -> &str;

    /// Largest window accepted in a single call, if limited.
    fn max_window_words(&self) -> Option<usize> {
        None
    }

    fn classify(&self, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError>;

    /// Classifies a window starting at word `start` of the full stream.
    ///
    /// Only classifiers tied to a particular stream care about the offset.
    fn classify_span(&self, start: usize, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        let _ = start;
        self.classify(window)
    }
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn max_window_words(&self) -> Option<usize> {
        (**self).max_window_words()
    }

    fn classify(&self, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        (**self).classify(window)
    }

    fn classify_span(&self, start: usize, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        (**self).classify_span(start, window)
    }
}

/// Always predicts the same label.
#[derive(Debug, Clone, Copy)]
pub struct ConstantClassifier(pub PunctLabel);

impl Classifier for ConstantClassifier {
    fn name(&self) -> &str {
        "constant"
    }

    fn classify(&self, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        if window.is_empty() {
            return Err(ClassifyError::EmptyWindow);
        }
        Ok(vec![self.0; window.len()])
    }
}

/// Rejects outputs that break the length contract.
pub(crate) fn check_length(expected: usize, labels: &[PunctLabel]) -> Result<(), ClassifyError> {
    if labels.len() != expected {
        return Err(ClassifyError::LengthMismatch { expected, got: labels.len() });
    }
    Ok(())
}
