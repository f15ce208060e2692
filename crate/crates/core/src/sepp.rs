//! The three-column SEPP tab-separated format.
//!
//! Every token is one line: `<word>\t<eos>\t<label>`, where `eos` is `1` when
//! the word ends a sentence and `label` is the punctuation mark that follows
//! the word (`0` for none).
//!
//! ```
//! use fullstop::sepp::{parse_sepp, write_sepp, PunctLabel};
//!
//! let doc = parse_sepp("vraag\t0\t:\nkunnen\t0\t0\n").unwrap();
//! assert_eq!(doc.tokens()[0].label(), PunctLabel::Colon);
//! assert_eq!(write_sepp(&doc), "vraag\t0\t:\nkunnen\t0\t0\n");
//! ```

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Punctuation mark following a word.
///
/// The declaration order is the global tie-break order used by the
/// classifiers and the segmenter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PunctLabel {
    None,
    Period,
    Comma,
    Question,
    Colon,
    Dash,
}

impl PunctLabel {
    pub const COUNT: usize = 6;

    /// All labels in tie-break order.
    pub const ALL: [PunctLabel; 6] = [
        PunctLabel::None,
        PunctLabel::Period,
        PunctLabel::Comma,
        PunctLabel::Question,
        PunctLabel::Colon,
        PunctLabel::Dash,
    ];

    pub fn as_char(self) -> char {
        match self {
            PunctLabel::None => '0',
            PunctLabel::Period => '.',
            PunctLabel::Comma => ',',
            PunctLabel::Question => '?',
            PunctLabel::Colon => ':',
            PunctLabel::Dash => '-',
        }
    }

    pub fn from_char(c: char) -> Option<PunctLabel> {
        match c {
            '0' => Some(PunctLabel::None),
            '.' => Some(PunctLabel::Period),
            ',' => Some(PunctLabel::Comma),
            '?' => Some(PunctLabel::Question),
            ':' => Some(PunctLabel::Colon),
            '-' => Some(PunctLabel::Dash),
            _ => None,
        }
    }

    /// Position in [`PunctLabel::ALL`].
    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> PunctLabel {
        PunctLabel::ALL[i]
    }

    pub fn is_none(self) -> bool {
        self == PunctLabel::None
    }
}

impl fmt::Display for PunctLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid punctuation label {0:?}")]
pub struct LabelParseError(pub String);

impl FromStr for PunctLabel {
    type Err = LabelParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => PunctLabel::from_char(c).ok_or_else(|| LabelParseError(s.to_owned())),
            _ => Err(LabelParseError(s.to_owned())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeppError {
    #[error("line {line}: expected 3 tab-separated fields, found {found}")]
    LineFormat { line: usize, found: usize },
    #[error("line {line}: sentence-end flag must be 0 or 1, found {value:?}")]
    BadFlag { line: usize, value: String },
    #[error("line {line}: unknown punctuation label {value:?}")]
    BadLabel { line: usize, value: String },
    #[error("line {line}: empty word")]
    EmptyWord { line: usize },
    #[error("line {line}: flag {eos} is inconsistent with label {label}")]
    Inconsistent { line: usize, eos: u8, label: PunctLabel },
    #[error("invalid word {0:?}: words must be non-empty, free of tabs and newlines, and not start with U+FEFF")]
    InvalidWord(String),
}

/// Checks the word column constraints. A leading U+FEFF is refused because
/// on the first line it would be read back as a byte order mark.
pub fn is_valid_word(word: &str) -> bool {
    !word.is_empty() && !word.starts_with('\u{feff}') && !word.contains(['\t', '\n', '\r'])
}

/// One SEPP row.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledToken {
    word: String,
    eos: bool,
    label: PunctLabel,
}

impl LabeledToken {
    /// Builds a token with an explicit sentence-end flag.
    ///
    /// The flag is not reconciled with the label here; [`write_sepp`] does that.
    pub fn new(word: impl Into<String>, eos: bool, label: PunctLabel) -> Result<Self, SeppError> {
        let word = word.into();
        if !is_valid_word(&word) {
            return Err(SeppError::InvalidWord(word));
        }
        Ok(LabeledToken { word, eos, label })
    }

    /// Builds a token whose flag follows from the label (`.` ends a sentence).
    pub fn with_label(word: impl Into<String>, label: PunctLabel) -> Result<Self, SeppError> {
        LabeledToken::new(word, label == PunctLabel::Period, label)
    }

    pub fn word(&self) -> &str {
        &self.word
    }

    pub fn eos(&self) -> bool {
        self.eos
    }

    pub fn label(&self) -> PunctLabel {
        self.label
    }

    pub fn set_label(&mut self, label: PunctLabel) {
        self.label = label;
    }

    pub fn set_eos(&mut self, eos: bool) {
        self.eos = eos;
    }

    /// True when the flag agrees with the label (`.` implies 1, `0` implies 0).
    pub fn is_consistent(&self) -> bool {
        match self.label {
            PunctLabel::Period => self.eos,
            PunctLabel::None => !self.eos,
            _ => true,
        }
    }

    /// The flag as written to disk.
    pub fn written_eos(&self) -> bool {
        match self.label {
            PunctLabel::Period => true,
            PunctLabel::None => false,
            _ => self.eos,
        }
    }
}

/// An ordered sequence of labeled tokens.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeppDocument {
    tokens: Vec<LabeledToken>,
    source_id: Option<String>,
}

impl SeppDocument {
    pub fn new(tokens: Vec<LabeledToken>) -> Self {
        SeppDocument { tokens, source_id: None }
    }

    pub fn with_source_id(mut self, id: impl Into<String>) -> Self {
        self.source_id = Some(id.into());
        self
    }

    /// Builds a document from parallel word and label columns.
    pub fn from_words_and_labels<S: AsRef<str>>(
        words: &[S],
        labels: &[PunctLabel],
    ) -> Result<Self, SeppError> {
        assert_eq!(words.len(), labels.len(), "word and label columns differ in length");
        let tokens = words
            .iter()
            .zip(labels)
            .map(|(w, &l)| LabeledToken::with_label(w.as_ref(), l))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(SeppDocument::new(tokens))
    }

    pub fn source_id(&self) -> Option<&str> {
        self.source_id.as_deref()
    }

    pub fn tokens(&self) -> &[LabeledToken] {
        &self.tokens
    }

    pub fn tokens_mut(&mut self) -> &mut [LabeledToken] {
        &mut self.tokens
    }

    pub fn into_tokens(self) -> Vec<LabeledToken> {
        self.tokens
    }

    pub fn push(&mut self, token: LabeledToken) {
        self.tokens.push(token);
    }

    pub fn extend(&mut self, other: SeppDocument) {
        self.tokens.extend(other.tokens);
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn labels(&self) -> Vec<PunctLabel> {
        self.tokens.iter().map(|t| t.label).collect()
    }

    /// Token slices, each ending at an `eos` token; a trailing run without one
    /// forms the last sentence.
    pub fn sentences(&self) -> Vec<&[LabeledToken]> {
        let mut out = Vec::new();
        let mut start = 0;
        for (i, tok) in self.tokens.iter().enumerate() {
            if tok.eos {
                out.push(&self.tokens[start..=i]);
                start = i + 1;
            }
        }
        if start < self.tokens.len() {
            out.push(&self.tokens[start..]);
        }
        out
    }

    pub fn sentence_count(&self) -> usize {
        self.sentences().len()
    }
}

/// Non-fatal finding from a lenient parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseWarning {
    pub line: usize,
    pub eos: bool,
    pub label: PunctLabel,
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}: flag {} is inconsistent with label {}",
            self.line, self.eos as u8, self.label
        )
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ParseOptions {
    /// Turn flag/label inconsistencies into errors.
    pub strict: bool,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub document: SeppDocument,
    pub warnings: Vec<ParseWarning>,
}

/// Lenient parse: inconsistent rows are accepted as written.
pub fn parse_sepp(text: &str) -> Result<SeppDocument, SeppError> {
    parse_sepp_with(text, ParseOptions::default()).map(|p| p.document)
}

pub fn parse_sepp_with(text: &str, opts: ParseOptions) -> Result<Parsed, SeppError> {
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut tokens = Vec::new();
    let mut warnings = Vec::new();

    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(SeppError::LineFormat { line: line_no, found: fields.len() });
        }
        let word = fields[0];
        if word.is_empty() {
            return Err(SeppError::EmptyWord { line: line_no });
        }
        let eos = match fields[1] {
            "0" => false,
            "1" => true,
            other => {
                return Err(SeppError::BadFlag { line: line_no, value: other.to_owned() });
            }
        };
        let label = fields[2]
            .parse::<PunctLabel>()
            .map_err(|_| SeppError::BadLabel { line: line_no, value: fields[2].to_owned() })?;
        let token = LabeledToken { word: word.to_owned(), eos, label };
        if !token.is_consistent() {
            if opts.strict {
                return Err(SeppError::Inconsistent { line: line_no, eos: eos as u8, label });
            }
            warnings.push(ParseWarning { line: line_no, eos, label });
        }
        tokens.push(token);
    }

    Ok(Parsed { document: SeppDocument::new(tokens), warnings })
}

/// Serializes a document; the flag column is reconciled with the label.
pub fn write_sepp(doc: &SeppDocument) -> String {
    let mut out = String::with_capacity(doc.tokens.len() * 12);
    for tok in &doc.tokens {
        out.push_str(&tok.word);
        out.push('\t');
        out.push(if tok.written_eos() { '1' } else { '0' });
        out.push('\t');
        out.push(tok.label.as_char());
        out.push('\n');
    }
    out
}

/// The word column alone: what an ASR system would produce.
pub fn strip_labels(doc: &SeppDocument) -> Vec<String> {
    doc.tokens.iter().map(|t| t.word.clone()).collect()
}
