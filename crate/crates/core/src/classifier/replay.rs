use super::{Classifier, ClassifyError};
use crate::sepp::{PunctLabel, SeppDocument};

/// Returns labels recorded for a known word stream.
///
/// Windows are looked up by their offset in the stream, and their words are
/// checked against the recording.
#[derive(Debug, Clone)]
pub struct ReplayClassifier {
    words: Vec<String>,
    labels: Vec<PunctLabel>,
}

impl ReplayClassifier {
    pub fn new(words: Vec<String>, labels: Vec<PunctLabel>) -> Self {
        assert_eq!(words.len(), labels.len(), "replay words and labels differ in length");
        ReplayClassifier { words, labels }
    }

    pub fn from_document(doc: &SeppDocument) -> Self {
        ReplayClassifier::new(crate::sepp::strip_labels(doc), doc.labels())
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn labels(&self) -> &[PunctLabel] {
        &self.labels
    }

    /// The recording restricted to `start..end`, re-based at zero.
    pub fn slice(&self, start: usize, end: usize) -> ReplayClassifier {
        ReplayClassifier::new(self.words[start..end].to_vec(), self.labels[start..end].to_vec())
    }
}

impl Classifier for ReplayClassifier {
    fn name(&self) -> &str {
        "replay"
    }

    fn classify(&self, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        self.classify_span(0, window)
    }

    fn classify_span(&self, start: usize, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        if window.is_empty() {
            return Err(ClassifyError::EmptyWindow);
        }
        let end = start + window.len();
        if end > self.words.len() {
            return Err(ClassifyError::ReplayOutOfRange { start, end, len: self.words.len() });
        }
        for (i, (got, expected)) in window.iter().zip(&self.words[start..end]).enumerate() {
            if got != expected {
                return Err(ClassifyError::ReplayMismatch {
                    index: start + i,
                    expected: expected.clone(),
                    got: got.clone(),
                });
            }
        }
        Ok(self.labels[start..end].to_vec())
    }
}
