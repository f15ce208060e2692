use std::collections::HashMap;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{Classifier, ClassifyError};
use crate::sepp::{PunctLabel, SeppDocument};

/// Hashed features live in `2^FEATURE_BITS` buckets.
pub const FEATURE_BITS: u32 = 20;
pub const TEMPLATE_VERSION: u32 = 1;
pub const MODEL_MAGIC: &[u8; 4] = b"FSLM";
pub const MODEL_VERSION: u32 = 1;

const NUM_LABELS: usize = PunctLabel::COUNT;

#[derive(Clone, Copy)]
#[repr(u8)]
enum Template {
    Bias = 0,
    Word = 1,
    Prev = 2,
    Next = 3,
    NextNext = 4,
    Lower = 5,
    Shape = 6,
    Position = 7,
    LastInWindow = 8,
}

/// 32-bit FNV-1a over the template id, a unit separator and the feature
/// value, masked to the feature space.
pub fn feature_hash(template: u8, value: &str) -> u32 {
    const OFFSET: u32 = 0x811c_9dc5;
    const PRIME: u32 = 0x0100_0193;
    let mut h = OFFSET;
    for b in [template, 0x1f].into_iter().chain(value.bytes()) {
        h ^= b as u32;
        h = h.wrapping_mul(PRIME);
    }
    h & ((1 << FEATURE_BITS) - 1)
}

fn word_shape(word: &str) -> String {
    let mut shape = String::new();
    let mut last = None;
    for c in word.chars() {
        let s = if c.is_uppercase() {
            'X'
        } else if c.is_lowercase() {
            'x'
        } else if c.is_ascii_digit() {
            'd'
        } else {
            c
        };
        if last != Some(s) {
            shape.push(s);
            last = Some(s);
        }
        if shape.len() >= 8 {
            break;
        }
    }
    shape
}

fn position_bucket(i: usize) -> &'static str {
    match i {
        0 => "0",
        1 => "1",
        2 => "2",
        3..=4 => "3-4",
        5..=9 => "5-9",
        10..=19 => "10-19",
        20..=49 => "20-49",
        50..=99 => "50-99",
        _ => "100+",
    }
}

fn token_features(window: &[String], i: usize) -> Vec<u32> {
    let at = |j: isize| -> &str {
        if j < 0 {
            "<s>"
        } else {
            window.get(j as usize).map_or("</s>", |w| w.as_str())
        }
    };
    let i_s = i as isize;
    let word = &window[i];
    vec![
        feature_hash(Template::Bias as u8, ""),
        feature_hash(Template::Word as u8, word),
        feature_hash(Template::Prev as u8, at(i_s - 1)),
        feature_hash(Template::Next as u8, at(i_s + 1)),
        feature_hash(Template::NextNext as u8, at(i_s + 2)),
        feature_hash(Template::Lower as u8, &word.to_lowercase()),
        feature_hash(Template::Shape as u8, &word_shape(word)),
        feature_hash(Template::Position as u8, position_bucket(i)),
        feature_hash(Template::LastInWindow as u8, if i + 1 == window.len() { "1" } else { "0" }),
    ]
}

/// Averaged-perceptron weights over hashed features.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    weights: HashMap<u32, [f64; NUM_LABELS]>,
    feature_bits: u32,
    template_version: u32,
    seed: u64,
    epochs: u32,
}

impl Default for LinearModel {
    fn default() -> Self {
        LinearModel {
            weights: HashMap::new(),
            feature_bits: FEATURE_BITS,
            template_version: TEMPLATE_VERSION,
            seed: 0,
            epochs: 0,
        }
    }
}

impl LinearModel {
    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn epochs(&self) -> u32 {
        self.epochs
    }

    /// Number of feature buckets with a non-zero weight.
    pub fn active_features(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, feature: u32, label: PunctLabel) -> f64 {
        self.weights.get(&feature).map_or(0.0, |w| w[label.index()])
    }

    fn scores(&self, features: &[u32]) -> [f64; NUM_LABELS] {
        let mut scores = [0.0; NUM_LABELS];
        for f in features {
            if let Some(w) = self.weights.get(f) {
                for (s, x) in scores.iter_mut().zip(w) {
                    *s += x;
                }
            }
        }
        scores
    }

    fn predict(&self, features: &[u32]) -> usize {
        argmax(&self.scores(features))
    }
}

// Ties go to the lowest label index.
fn argmax(scores: &[f64; NUM_LABELS]) -> usize {
    let mut best = 0;
    for (i, &s) in scores.iter().enumerate().skip(1) {
        if s > scores[best] {
            best = i;
        }
    }
    best
}

impl Classifier for LinearModel {
    fn name(&self) -> &str {
        "builtin"
    }

    fn classify(&self, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        if window.is_empty() {
            return Err(ClassifyError::EmptyWindow);
        }
        Ok((0..window.len())
            .map(|i| PunctLabel::from_index(self.predict(&token_features(window, i))))
            .collect())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TrainOptions {
    pub epochs: u32,
    pub seed: u64,
    /// Training documents are cut into windows of this many words so that
    /// position features match what the segmenter feeds the model.
    pub window_words: usize,
}

impl Default for TrainOptions {
    fn default() -> Self {
        TrainOptions { epochs: 5, seed: 0, window_words: 200 }
    }
}

#[derive(Default, Clone)]
struct FeatureRecord {
    weight: [f64; NUM_LABELS],
    total: [f64; NUM_LABELS],
    stamp: [u64; NUM_LABELS],
}

/// Trains an averaged perceptron on the per-token decisions of `train`.
pub fn train_reference(train: &[SeppDocument], opts: &TrainOptions) -> Result<LinearModel, ClassifyError> {
    let window = opts.window_words.max(1);
    // Documents are joined into one stream, as the segmenter would see them,
    // in a canonical order so the listing order does not matter. Windowing
    // each document on its own would put every sentence-per-document period
    // on a window end.
    let mut docs: Vec<(Vec<&str>, Vec<usize>)> = train
        .iter()
        .map(|d| (d.tokens().iter().map(|t| t.word()).collect(), d.labels().iter().map(|l| l.index()).collect()))
        .collect();
    docs.sort_unstable();
    let words: Vec<String> = docs.iter().flat_map(|d| d.0.iter().map(|w| w.to_string())).collect();
    let labels: Vec<usize> = docs.iter().flat_map(|d| d.1.iter().copied()).collect();
    let mut examples: Vec<(Vec<u32>, usize)> = Vec::with_capacity(words.len());
    for (k, chunk) in words.chunks(window).enumerate() {
        for i in 0..chunk.len() {
            examples.push((token_features(chunk, i), labels[k * window + i]));
        }
    }
    if examples.is_empty() {
        return Err(ClassifyError::EmptyTrainingSet);
    }
    // Canonical order first, so the seeded shuffle does not depend on how the
    // documents were listed.
    examples.sort_unstable();

    let mut records: HashMap<u32, FeatureRecord> = HashMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut order: Vec<usize> = (0..examples.len()).collect();
    let mut step: u64 = 0;

    for _ in 0..opts.epochs {
        order.shuffle(&mut rng);
        for &idx in &order {
            let (features, gold) = &examples[idx];
            let mut scores = [0.0; NUM_LABELS];
            for f in features {
                if let Some(r) = records.get(f) {
                    for (s, w) in scores.iter_mut().zip(&r.weight) {
                        *s += w;
                    }
                }
            }
            let guess = argmax(&scores);
            if guess != *gold {
                for f in features {
                    let r = records.entry(*f).or_default();
                    for (label, delta) in [(*gold, 1.0), (guess, -1.0)] {
                        r.total[label] += (step - r.stamp[label]) as f64 * r.weight[label];
                        r.stamp[label] = step;
                        r.weight[label] += delta;
                    }
                }
            }
            step += 1;
        }
    }

    let mut weights = HashMap::new();
    if step > 0 {
        for (f, r) in records {
            let mut avg = [0.0; NUM_LABELS];
            for l in 0..NUM_LABELS {
                let total = r.total[l] + (step - r.stamp[l]) as f64 * r.weight[l];
                avg[l] = total / step as f64;
            }
            if avg.iter().any(|&w| w != 0.0) {
                weights.insert(f, avg);
            }
        }
    }

    Ok(LinearModel {
        weights,
        feature_bits: FEATURE_BITS,
        template_version: TEMPLATE_VERSION,
        seed: opts.seed,
        epochs: opts.epochs,
    })
}

#[derive(Debug, Error)]
pub enum ModelFileError {
    #[error("not a model file (bad magic)")]
    BadMagic,
    #[error("unsupported model file version {0}")]
    VersionMismatch(u32),
    #[error("corrupt model file: {0}")]
    Corrupt(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

fn label_alphabet() -> Vec<u8> {
    PunctLabel::ALL.iter().map(|l| l.as_char() as u8).collect()
}

/// Binary layout: magic, u32 version, then three u32-length-prefixed
/// sections (header, label alphabet, weight triples). Little endian.
pub fn write_model<W: Write>(model: &LinearModel, mut out: W) -> io::Result<()> {
    let mut header = Vec::with_capacity(20);
    header.extend_from_slice(&model.feature_bits.to_le_bytes());
    header.extend_from_slice(&model.template_version.to_le_bytes());
    header.extend_from_slice(&model.seed.to_le_bytes());
    header.extend_from_slice(&model.epochs.to_le_bytes());

    let mut triples: Vec<(u32, u8, f64)> = model
        .weights
        .iter()
        .flat_map(|(&f, w)| {
            w.iter().enumerate().filter(|(_, x)| **x != 0.0).map(move |(l, &x)| (f, l as u8, x))
        })
        .collect();
    triples.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut body = Vec::with_capacity(8 + triples.len() * 13);
    body.extend_from_slice(&(triples.len() as u64).to_le_bytes());
    for (f, l, x) in triples {
        body.extend_from_slice(&f.to_le_bytes());
        body.push(l);
        body.extend_from_slice(&x.to_le_bytes());
    }

    out.write_all(MODEL_MAGIC)?;
    out.write_all(&MODEL_VERSION.to_le_bytes())?;
    for section in [header, label_alphabet(), body] {
        out.write_all(&(section.len() as u32).to_le_bytes())?;
        out.write_all(&section)?;
    }
    Ok(())
}

struct Cursor<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8], ModelFileError> {
        let end = self.pos.checked_add(n).filter(|&e| e <= self.buf.len());
        match end {
            Some(end) => {
                let s = &self.buf[self.pos..end];
                self.pos = end;
                Ok(s)
            }
            None => Err(ModelFileError::Corrupt(format!("truncated {what}"))),
        }
    }

    fn u32(&mut self, what: &str) -> Result<u32, ModelFileError> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64, ModelFileError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }

    fn section(&mut self, what: &str) -> Result<Cursor<'a>, ModelFileError> {
        let len = self.u32(what)? as usize;
        Ok(Cursor { buf: self.take(len, what)?, pos: 0 })
    }

    fn finish(&self, what: &str) -> Result<(), ModelFileError> {
        if self.pos != self.buf.len() {
            return Err(ModelFileError::Corrupt(format!("trailing bytes after {what}")));
        }
        Ok(())
    }
}

pub fn read_model(bytes: &[u8]) -> Result<LinearModel, ModelFileError> {
    if bytes.len() < 4 || &bytes[..4] != MODEL_MAGIC {
        return Err(ModelFileError::BadMagic);
    }
    let mut cur = Cursor { buf: bytes, pos: 4 };
    let version = cur.u32("version")?;
    if version != MODEL_VERSION {
        return Err(ModelFileError::VersionMismatch(version));
    }

    let mut header = cur.section("header")?;
    let feature_bits = header.u32("header")?;
    let template_version = header.u32("header")?;
    let seed = header.u64("header")?;
    let epochs = header.u32("header")?;
    header.finish("header")?;
    if feature_bits != FEATURE_BITS || template_version != TEMPLATE_VERSION {
        return Err(ModelFileError::Corrupt(format!(
            "feature space 2^{feature_bits} / template v{template_version} not supported"
        )));
    }

    let labels = cur.section("label list")?;
    if labels.buf != label_alphabet().as_slice() {
        return Err(ModelFileError::Corrupt("unexpected label list".into()));
    }

    let mut body = cur.section("weights")?;
    let count = body.u64("weights")? as usize;
    if count.checked_mul(13) != Some(body.buf.len() - body.pos) {
        return Err(ModelFileError::Corrupt("weight count does not match section length".into()));
    }
    let mut weights: HashMap<u32, [f64; NUM_LABELS]> = HashMap::new();
    for _ in 0..count {
        let f = body.u32("weights")?;
        let l = body.take(1, "weights")?[0] as usize;
        let x = f64::from_le_bytes(body.take(8, "weights")?.try_into().unwrap());
        if l >= NUM_LABELS || f >> feature_bits != 0 || !x.is_finite() {
            return Err(ModelFileError::Corrupt("weight triple out of range".into()));
        }
        weights.entry(f).or_insert([0.0; NUM_LABELS])[l] = x;
    }
    cur.finish("weights")?;

    Ok(LinearModel { weights, feature_bits, template_version, seed, epochs })
}

pub fn save_model(model: &LinearModel, path: impl AsRef<Path>) -> Result<(), ModelFileError> {
    let mut buf = Vec::new();
    write_model(model, &mut buf)?;
    crate::io::write_atomic(path.as_ref(), &buf)?;
    Ok(())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LinearModel, ModelFileError> {
    read_model(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sepp::LabeledToken;

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(str::to_owned).collect()
    }

    fn abc_corpus(reps: usize) -> SeppDocument {
        let mut doc = SeppDocument::default();
        for _ in 0..reps {
            doc.push(LabeledToken::with_label("a", PunctLabel::None).unwrap());
            doc.push(LabeledToken::with_label("b", PunctLabel::None).unwrap());
            doc.push(LabeledToken::with_label("c", PunctLabel::Period).unwrap());
        }
        doc
    }

    #[test]
    fn hash_is_stable() {
        // FNV-1a reference values, fixed so model files stay portable.
        assert_eq!(feature_hash(0, ""), 0x66700);
        assert_eq!(feature_hash(1, "a"), 0xb0498);
        assert_ne!(feature_hash(1, "a"), feature_hash(2, "a"));
    }

    #[test]
    fn zero_model_predicts_none() {
        let m = LinearModel::default();
        assert_eq!(m.classify(&words("x y")).unwrap(), vec![PunctLabel::None; 2]);
        assert_eq!(m.classify(&words("x")).unwrap().len(), 1);
        assert_eq!(m.classify(&[]).unwrap_err(), ClassifyError::EmptyWindow);
    }

    #[test]
    fn zero_epochs_gives_zero_model() {
        let m = train_reference(&[abc_corpus(3)], &TrainOptions { epochs: 0, ..Default::default() }).unwrap();
        assert_eq!(m.active_features(), 0);
        assert_eq!(m.classify(&words("a b c")).unwrap(), vec![PunctLabel::None; 3]);
    }

    #[test]
    fn learns_separable_abc() {
        let corpus = abc_corpus(100);
        let m = train_reference(&[corpus.clone()], &TrainOptions { epochs: 3, ..Default::default() }).unwrap();
        let stream: Vec<String> = corpus.tokens().iter().map(|t| t.word().to_owned()).collect();
        let gold = corpus.labels();
        let mut correct = 0;
        for (k, chunk) in stream.chunks(200).enumerate() {
            let pred = m.classify(chunk).unwrap();
            correct += pred.iter().zip(&gold[k * 200..]).filter(|(p, g)| p == g).count();
        }
        assert_eq!(correct, gold.len());
        assert_eq!(
            m.classify(&words("a b c")).unwrap(),
            vec![PunctLabel::None, PunctLabel::None, PunctLabel::Period]
        );
    }

    #[test]
    fn training_is_deterministic_and_order_free() {
        let d1 = abc_corpus(5);
        let d2 = crate::sepp::parse_sepp("x\t0\t,\ny\t0\t0\nz\t1\t?\n").unwrap();
        let opts = TrainOptions { epochs: 4, seed: 11, ..Default::default() };
        let m1 = train_reference(&[d1.clone(), d2.clone()], &opts).unwrap();
        let m2 = train_reference(&[d1.clone(), d2.clone()], &opts).unwrap();
        let m3 = train_reference(&[d2, d1], &opts).unwrap();
        assert_eq!(m1, m2);
        assert_eq!(m1, m3);
    }

    #[test]
    fn empty_training_set() {
        assert_eq!(
            train_reference(&[], &TrainOptions::default()).unwrap_err(),
            ClassifyError::EmptyTrainingSet
        );
    }

    #[test]
    fn model_file_round_trip_and_errors() {
        let m = train_reference(&[abc_corpus(20)], &TrainOptions { epochs: 2, seed: 3, ..Default::default() })
            .unwrap();
        let mut buf = Vec::new();
        write_model(&m, &mut buf).unwrap();
        assert_eq!(&buf[..4], b"FSLM");
        let back = read_model(&buf).unwrap();
        assert_eq!(back, m);

        assert!(matches!(read_model(&buf[..buf.len() - 3]), Err(ModelFileError::Corrupt(_))));
        assert!(matches!(read_model(&buf[..10]), Err(ModelFileError::Corrupt(_))));
        let mut bad = buf.clone();
        bad[0] = b'X';
        assert!(matches!(read_model(&bad), Err(ModelFileError::BadMagic)));
        let mut bad = buf.clone();
        bad[4] = 9;
        assert!(matches!(read_model(&bad), Err(ModelFileError::VersionMismatch(9))));
        let mut bad = buf;
        bad.push(0);
        assert!(matches!(read_model(&bad), Err(ModelFileError::Corrupt(_))));
    }
}
