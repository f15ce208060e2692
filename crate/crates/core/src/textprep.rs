//! Raw text to SEPP: tokenization, truecasing, label extraction and
//! train/test splitting.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::sepp::{LabeledToken, PunctLabel, SeppDocument};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PrepError {
    #[error("no non-initial token observed; cannot train a truecaser")]
    EmptyCorpus,
    #[error("need at least 2 units to split, found {0}")]
    TooFewUnits(usize),
    #[error("train fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
    #[error("truecase model line {line}: {reason}")]
    BadModelLine { line: usize, reason: String },
}

/// Characters split off as their own tokens.
pub const DETACH_CLASS: [char; 12] = ['.', ',', '?', '!', ':', ';', '(', ')', '"', '\'', '/', '-'];

#[inline]
fn is_detach(c: char) -> bool {
    DETACH_CLASS.contains(&c)
}

/// True for tokens made only of detach-class characters.
pub fn is_punct_token(tok: &str) -> bool {
    !tok.is_empty() && tok.chars().all(is_detach)
}

/// Splits one line into word and punctuation tokens.
///
/// Punctuation from the detach class becomes a token of its own, except a
/// `.`, `,` or `/` with a digit on both sides (`3,5`, `1.000`, `24/7`).
/// An apostrophe always stands alone, so `zo'n` gives `zo ' n`.
pub fn tokenize(line: &str) -> Vec<String> {
    let chars: Vec<char> = line.chars().collect();
    let mut tokens = Vec::new();
    let mut current = String::new();

    for (i, &c) in chars.iter().enumerate() {
        if c.is_whitespace() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            continue;
        }
        if is_detach(c) {
            let digit_flanked = matches!(c, '.' | ',' | '/')
                && i > 0
                && chars[i - 1].is_ascii_digit()
                && chars.get(i + 1).is_some_and(|n| n.is_ascii_digit());
            if !digit_flanked {
                if !current.is_empty() {
                    tokens.push(std::mem::take(&mut current));
                }
                tokens.push(c.to_string());
                continue;
            }
        }
        current.push(c);
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

fn fold(word: &str) -> String {
    word.to_lowercase()
}

/// Frequency table of surface forms seen away from sentence starts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TruecaseModel {
    counts: BTreeMap<String, BTreeMap<String, u64>>,
}

impl TruecaseModel {
    /// Counts the non-initial tokens of one sentence.
    pub fn observe<S: AsRef<str>>(&mut self, sentence: &[S]) {
        for tok in sentence.iter().skip(1) {
            let tok = tok.as_ref();
            *self.counts.entry(fold(tok)).or_default().entry(tok.to_owned()).or_insert(0) += 1;
        }
    }

    /// Adds another model's counts; shards may be counted independently.
    pub fn merge(&mut self, other: &TruecaseModel) {
        for (key, forms) in &other.counts {
            let entry = self.counts.entry(key.clone()).or_default();
            for (form, n) in forms {
                *entry.entry(form.clone()).or_insert(0) += n;
            }
        }
    }

    /// Most frequent form for the folded key; ties go to the smallest form.
    pub fn best(&self, key: &str) -> Option<(&str, u64)> {
        let forms = self.counts.get(key)?;
        // BTreeMap iterates forms in ascending order, so the first max wins ties.
        let mut best: Option<(&str, u64)> = None;
        for (form, &n) in forms {
            if best.map_or(true, |(_, b)| n > b) {
                best = Some((form.as_str(), n));
            }
        }
        best
    }

    pub fn lookup(&self, word: &str) -> Option<&str> {
        self.best(&fold(word)).map(|(f, _)| f)
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// `<key>\t<form>\t<count>` lines sorted by key, one line per observed form.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (key, forms) in &self.counts {
            for (form, n) in forms {
                out.push_str(&format!("{key}\t{form}\t{n}\n"));
            }
        }
        out
    }

    pub fn from_tsv(text: &str) -> Result<Self, PrepError> {
        let mut model = TruecaseModel::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = |reason: &str| PrepError::BadModelLine { line: i + 1, reason: reason.to_owned() };
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 3 {
                return Err(bad("expected 3 tab-separated fields"));
            }
            let n: u64 = fields[2].parse().map_err(|_| bad("count is not an integer"))?;
            if fold(fields[1]) != fields[0] {
                return Err(bad("form does not fold to its key"));
            }
            *model
                .counts
                .entry(fields[0].to_owned())
                .or_default()
                .entry(fields[1].to_owned())
                .or_insert(0) += n;
        }
        Ok(model)
    }
}

pub fn train_truecaser<S: AsRef<str>>(sentences: &[Vec<S>]) -> Result<TruecaseModel, PrepError> {
    let mut model = TruecaseModel::default();
    for s in sentences {
        model.observe(s);
    }
    if model.is_empty() {
        return Err(PrepError::EmptyCorpus);
    }
    Ok(model)
}

/// Recases the first token of a sentence; the rest pass through.
pub fn truecase<S: AsRef<str>>(sentence: &[S], model: &TruecaseModel) -> Vec<String> {
    let mut out: Vec<String> = sentence.iter().map(|s| s.as_ref().to_owned()).collect();
    if let Some(first) = out.first_mut() {
        *first = match model.lookup(first) {
            Some(form) => form.to_owned(),
            None => first.to_lowercase(),
        };
    }
    out
}

/// Maps punctuation tokens onto labels; unmapped tokens are dropped.
#[derive(Debug, Clone)]
pub struct PunctMapping {
    map: HashMap<String, PunctLabel>,
}

impl Default for PunctMapping {
    fn default() -> Self {
        let mut map = HashMap::new();
        for l in PunctLabel::ALL.iter().skip(1) {
            map.insert(l.as_char().to_string(), *l);
        }
        map.insert("!".to_owned(), PunctLabel::Period);
        map.insert(";".to_owned(), PunctLabel::Comma);
        PunctMapping { map }
    }
}

impl PunctMapping {
    pub fn empty() -> Self {
        PunctMapping { map: HashMap::new() }
    }

    pub fn insert(&mut self, token: impl Into<String>, label: PunctLabel) -> &mut Self {
        self.map.insert(token.into(), label);
        self
    }

    pub fn label_for(&self, token: &str) -> Option<PunctLabel> {
        self.map.get(token).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrepWarning {
    /// The sentence held only punctuation and produced no rows.
    EmptySentence { sentence: usize },
}

impl fmt::Display for PrepWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrepWarning::EmptySentence { sentence } => {
                write!(f, "sentence {sentence} contains only punctuation; skipped")
            }
        }
    }
}

/// Moves punctuation tokens into the label column.
///
/// The first mapped punctuation token after a word becomes its label; later
/// punctuation up to the next word is dropped, as is punctuation before the
/// first word. The sentence-end flag is set for `.` and for a labeled word
/// that closes its sentence.
pub fn extract_labels<S: AsRef<str>>(
    sentences: &[Vec<S>],
    mapping: &PunctMapping,
) -> (SeppDocument, Vec<PrepWarning>) {
    let mut doc = SeppDocument::default();
    let mut warnings = Vec::new();

    for (si, sentence) in sentences.iter().enumerate() {
        let mut rows: Vec<(String, PunctLabel)> = Vec::new();
        for tok in sentence {
            let tok = tok.as_ref();
            if is_punct_token(tok) {
                if let (Some(last), Some(label)) = (rows.last_mut(), mapping.label_for(tok)) {
                    if last.1.is_none() {
                        last.1 = label;
                    }
                }
            } else {
                rows.push((tok.to_owned(), PunctLabel::None));
            }
        }
        if rows.is_empty() {
            warnings.push(PrepWarning::EmptySentence { sentence: si });
            continue;
        }
        let last = rows.len() - 1;
        for (i, (word, label)) in rows.into_iter().enumerate() {
            let eos = label == PunctLabel::Period || (i == last && !label.is_none());
            let token = LabeledToken::new(word, eos, label)
                .expect("tokenizer output never contains empty or whitespace words");
            doc.push(token);
        }
    }
    (doc, warnings)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitUnit {
    Document,
    Sentence,
}

#[derive(Debug, Clone, Copy)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
    pub unit: SplitUnit,
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec { train_fraction: 0.75, seed: 0, unit: SplitUnit::Document }
    }
}

/// Number of units assigned to the training side: `ceil(fraction * n)`.
pub fn train_count(n: usize, fraction: f64) -> usize {
    ((fraction * n as f64).ceil() as usize).min(n)
}

/// Seeded shuffle followed by a prefix cut.
pub fn split_units<T>(mut units: Vec<T>, fraction: f64, seed: u64) -> Result<(Vec<T>, Vec<T>), PrepError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(PrepError::BadFraction(fraction));
    }
    if units.len() < 2 {
        return Err(PrepError::TooFewUnits(units.len()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    units.shuffle(&mut rng);
    let test = units.split_off(train_count(units.len(), fraction));
    Ok((units, test))
}

/// Splits documents, or their sentences when `spec.unit` is `Sentence`
/// (each sentence then becomes a one-sentence document).
pub fn split_corpus(
    documents: &[SeppDocument],
    spec: &SplitSpec,
) -> Result<(Vec<SeppDocument>, Vec<SeppDocument>), PrepError> {
    let units: Vec<SeppDocument> = match spec.unit {
        SplitUnit::Document => documents.to_vec(),
        SplitUnit::Sentence => documents
            .iter()
            .flat_map(|d| d.sentences().into_iter().map(|s| SeppDocument::new(s.to_vec())))
            .collect(),
    };
    split_units(units, spec.train_fraction, spec.seed)
}

/// Drops markup lines (any line containing both `<` and `>`).
pub fn is_markup_line(line: &str) -> bool {
    line.contains('<') && line.contains('>')
}

/// Output of [`prepare_corpus`].
#[derive(Debug, Clone)]
pub struct Prepared {
    pub document: SeppDocument,
    pub truecaser: TruecaseModel,
    pub sentences: usize,
    pub warnings: Vec<PrepWarning>,
}

/// One sentence per line in, SEPP out: tokenize, truecase, extract labels.
///
/// Without a truecase model one is trained on the input itself.
pub fn prepare_corpus(
    raw: &str,
    truecaser: Option<&TruecaseModel>,
    mapping: &PunctMapping,
) -> Result<Prepared, PrepError> {
    let tokenized: Vec<Vec<String>> = raw
        .lines()
        .filter(|l| !is_markup_line(l))
        .map(tokenize)
        .filter(|t| !t.is_empty())
        .collect();
    if tokenized.is_empty() {
        return Err(PrepError::TooFewUnits(0));
    }
    let model = match truecaser {
        Some(m) => m.clone(),
        None => train_truecaser(&tokenized)?,
    };
    let cased: Vec<Vec<String>> = tokenized.iter().map(|s| truecase(s, &model)).collect();
    let (document, warnings) = extract_labels(&cased, mapping);
    Ok(Prepared { sentences: cased.len(), document, truecaser: model, warnings })
}
