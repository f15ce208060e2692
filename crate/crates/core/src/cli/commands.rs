//! One function per subcommand. Data goes to files or the returned string;
//! nothing here prints.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::{CliError, RunConfig};
use crate::classifier::{save_model, train_reference, Classifier, TrainOptions};
use crate::io::write_atomic;
use crate::metrics::{
    boundaries_from_labels, boundary_score, paired_significance, report, split_testfiles, summarize, BoundaryScore,
    ConfusionMatrix, DistributionSummary, EvalReport, Resampling,
};
use crate::segmenter::{accumulate_votes_at, decide, LabelSet, SegmentedText, VoteTable};
use crate::sepp::{parse_sepp, strip_labels, write_sepp, PunctLabel, SeppDocument};
use crate::textprep::{prepare_corpus, split_corpus, PunctMapping, SplitSpec, TruecaseModel};

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    write_atomic(path, text.as_bytes()).map_err(|e| CliError::io(path, e))
}

pub fn read_sepp(path: &Path) -> Result<SeppDocument, CliError> {
    let doc = parse_sepp(&read_text(path)?).map_err(|source| CliError::Sepp { path: path.into(), source })?;
    Ok(doc.with_source_id(path.display().to_string()))
}

/// Reads a word stream: a SEPP file (label columns ignored) when any line
/// contains a tab, whitespace-separated words otherwise.
pub fn read_stream(path: &Path) -> Result<Vec<String>, CliError> {
    let text = read_text(path)?;
    if text.lines().any(|l| l.contains('\t')) {
        let doc = parse_sepp(&text).map_err(|source| CliError::Sepp { path: path.into(), source })?;
        Ok(strip_labels(&doc))
    } else {
        Ok(text.split_whitespace().map(str::to_owned).collect())
    }
}

#[derive(Debug, Clone)]
pub struct PrepareSummary {
    pub sentences: usize,
    pub tokens: usize,
    pub warnings: Vec<String>,
}

/// Raw text, one sentence per line, to SEPP.
pub fn prepare(
    input: &Path,
    output: &Path,
    truecase_model: Option<&Path>,
    save_truecaser: Option<&Path>,
) -> Result<PrepareSummary, CliError> {
    let raw = read_text(input)?;
    let model = match truecase_model {
        Some(p) => Some(TruecaseModel::from_tsv(&read_text(p)?)?),
        None => None,
    };
    let prepared = prepare_corpus(&raw, model.as_ref(), &PunctMapping::default())?;
    write_text(output, &write_sepp(&prepared.document))?;
    if let Some(p) = save_truecaser {
        write_text(p, &prepared.truecaser.to_tsv())?;
    }
    Ok(PrepareSummary {
        sentences: prepared.sentences,
        tokens: prepared.document.len(),
        warnings: prepared.warnings.iter().map(|w| w.to_string()).collect(),
    })
}

/// Splits SEPP files into train and test files; returns the unit counts.
pub fn split(inputs: &[PathBuf], spec: &SplitSpec, train_out: &Path, test_out: &Path) -> Result<(usize, usize), CliError> {
    let docs = inputs.iter().map(|p| read_sepp(p)).collect::<Result<Vec<_>, _>>()?;
    let (train, test) = split_corpus(&docs, spec)?;
    let join = |units: &[SeppDocument]| {
        let mut all = SeppDocument::default();
        for u in units {
            all.extend(u.clone());
        }
        write_sepp(&all)
    };
    write_text(train_out, &join(&train))?;
    write_text(test_out, &join(&test))?;
    Ok((train.len(), test.len()))
}

/// Trains the reference model; returns the number of active features.
pub fn train(inputs: &[PathBuf], opts: &TrainOptions, output: &Path) -> Result<usize, CliError> {
    let docs = inputs.iter().map(|p| read_sepp(p)).collect::<Result<Vec<_>, _>>()?;
    let model = train_reference(&docs, opts)?;
    save_model(&model, output)?;
    Ok(model.active_features())
}

/// Labels a stream window by window without voting.
pub fn classify(stream: &[String], run: &RunConfig) -> Result<SeppDocument, CliError> {
    if stream.is_empty() {
        return Err(crate::segmenter::SegmentError::EmptyStream.into());
    }
    let classifier = run.build_classifier()?;
    let chunk = classifier
        .max_window_words()
        .unwrap_or(usize::MAX)
        .min(run.segmenter.window_words)
        .min(run.segmenter.chunk_token_budget);
    let mut labels = Vec::with_capacity(stream.len());
    for (k, window) in stream.chunks(chunk).enumerate() {
        let out = classifier.classify_span(k * chunk, window)?;
        crate::classifier::check_length(window.len(), &out)?;
        labels.extend(out);
    }
    Ok(SeppDocument::from_words_and_labels(stream, &labels).expect("stream words are valid"))
}

pub fn segment(stream: &[String], run: &RunConfig) -> Result<SegmentedText, CliError> {
    let classifier = run.build_classifier()?;
    let votes = accumulate_votes_at(stream, 0, &classifier, &run.segmenter)?;
    Ok(SegmentedText::from_decision(stream, &decide(&votes, &run.segmenter)))
}

fn check_aligned(gold: &SeppDocument, pred: &SeppDocument) -> Result<(), CliError> {
    for (i, (g, p)) in gold.tokens().iter().zip(pred.tokens()).enumerate() {
        if g.word() != p.word() {
            return Err(CliError::WordMismatch { index: i, gold: g.word().into(), pred: p.word().into() });
        }
    }
    if gold.len() != pred.len() {
        let i = gold.len().min(pred.len());
        let at = |d: &SeppDocument| d.tokens().get(i).map_or("<end>".to_owned(), |t| t.word().to_owned());
        return Err(CliError::WordMismatch { index: i, gold: at(gold), pred: at(pred) });
    }
    Ok(())
}

pub fn eval_labels(gold: &SeppDocument, pred: &SeppDocument) -> Result<(EvalReport, ConfusionMatrix), CliError> {
    check_aligned(gold, pred)?;
    let cm = ConfusionMatrix::compute(&gold.labels(), &pred.labels())?;
    Ok((report(&cm)?, cm))
}

pub fn eval_boundaries(gold: &SeppDocument, pred: &SeppDocument, segmenters: LabelSet) -> Result<BoundaryScore, CliError> {
    check_aligned(gold, pred)?;
    score_boundaries(&gold.labels(), &pred.labels(), segmenters)
}

fn score_boundaries(gold: &[PunctLabel], pred: &[PunctLabel], segmenters: LabelSet) -> Result<BoundaryScore, CliError> {
    Ok(boundary_score(
        &boundaries_from_labels(gold, segmenters),
        &boundaries_from_labels(pred, segmenters),
        gold.len(),
    )?)
}

pub fn boundary_score_tsv(score: &BoundaryScore) -> String {
    format!(
        "tp\tfp\tfn\tprecision\trecall\tf1\n{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}\n",
        score.true_positives, score.false_positives, score.false_negatives, score.precision, score.recall, score.f1
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub theta: f64,
    pub predicted: usize,
    pub score: BoundaryScore,
}

/// Classifies once, then decides and scores per theta.
pub fn sweep(gold: &SeppDocument, run: &RunConfig, thetas: &[f64]) -> Result<Vec<SweepRow>, CliError> {
    if thetas.is_empty() {
        return Err(CliError::Usage("sweep needs at least one theta".into()));
    }
    let classifier = run.build_classifier()?;
    let stream = strip_labels(gold);
    let votes = accumulate_votes_at(&stream, 0, &classifier, &run.segmenter)?;
    sweep_votes(gold, &votes, run, thetas)
}

pub fn sweep_votes(gold: &SeppDocument, votes: &VoteTable, run: &RunConfig, thetas: &[f64]) -> Result<Vec<SweepRow>, CliError> {
    let gold_labels = gold.labels();
    thetas
        .iter()
        .map(|&theta| {
            let mut cfg = run.segmenter.clone();
            cfg.theta = theta;
            cfg.validate()?;
            let decision = decide(votes, &cfg);
            let score = score_boundaries(&gold_labels, &decision.labels, cfg.segmenters)?;
            Ok(SweepRow { theta, predicted: decision.boundaries.len(), score })
        })
        .collect()
}

pub fn sweep_tsv(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta\tpredicted\tprecision\trecall\tf1\n");
    for r in rows {
        writeln!(out, "{}\t{}\t{:.6}\t{:.6}\t{:.6}", r.theta, r.predicted, r.score.precision, r.score.recall, r.score.f1)
            .unwrap();
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignificanceResult {
    pub scores_a: Vec<f64>,
    pub scores_b: Vec<f64>,
    pub summary_a: DistributionSummary,
    pub summary_b: DistributionSummary,
    pub p_value: f64,
    pub resampling: Resampling,
}

impl SignificanceResult {
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", DistributionSummary::TSV_HEADER).unwrap();
        writeln!(out, "{}", self.summary_a.tsv_row("A")).unwrap();
        writeln!(out, "{}", self.summary_b.tsv_row("B")).unwrap();
        writeln!(out, "\ncomparison\tp_value").unwrap();
        writeln!(out, "A-B\t{:.6}", self.p_value).unwrap();
        out
    }

    /// Per-file scores, one row per test file.
    pub fn scores_tsv(&self) -> String {
        let mut out = String::from("file\tA\tB\n");
        for (i, (a, b)) in self.scores_a.iter().zip(&self.scores_b).enumerate() {
            writeln!(out, "{i}\t{a:.6}\t{b:.6}").unwrap();
        }
        out
    }
}

fn block_votes(blocks: &[(usize, Vec<String>)], classifier: &dyn Classifier, run: &RunConfig) -> Result<Vec<VoteTable>, CliError> {
    blocks
        .iter()
        .map(|(offset, words)| Ok(accumulate_votes_at(words, *offset, classifier, &run.segmenter)?))
        .collect()
}

/// Per-file boundary F1 for two conditions on the same test files, their
/// summaries and a paired sign-flip test.
pub fn significance(gold: &SeppDocument, a: &RunConfig, b: &RunConfig, block_size: usize) -> Result<SignificanceResult, CliError> {
    let files = split_testfiles(gold, block_size)?;
    if files.len() < 2 {
        return Err(crate::metrics::MetricsError::TooFewPairs { found: files.len(), needed: 2 }.into());
    }
    let mut offset = 0;
    let blocks: Vec<(usize, Vec<String>)> = files
        .iter()
        .map(|f| {
            let words = strip_labels(f);
            let start = offset;
            offset += words.len();
            (start, words)
        })
        .collect();

    let votes_a = block_votes(&blocks, a.build_classifier()?.as_ref(), a)?;
    let votes_b = if a.same_votes(b) { votes_a.clone() } else { block_votes(&blocks, b.build_classifier()?.as_ref(), b)? };

    let score = |votes: &[VoteTable], run: &RunConfig| -> Result<Vec<f64>, CliError> {
        files
            .iter()
            .zip(votes)
            .map(|(f, v)| {
                let d = decide(v, &run.segmenter);
                Ok(score_boundaries(&f.labels(), &d.labels, run.segmenter.segmenters)?.f1)
            })
            .collect()
    };
    let scores_a = score(&votes_a, a)?;
    let scores_b = score(&votes_b, b)?;
    let resampling = Resampling::auto(scores_a.len(), a.permutations, a.seed);
    Ok(SignificanceResult {
        summary_a: summarize(&scores_a)?,
        summary_b: summarize(&scores_b)?,
        p_value: paired_significance(&scores_a, &scores_b, resampling)?,
        scores_a,
        scores_b,
        resampling,
    })
}
