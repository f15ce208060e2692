//! Compares two settings over many fixed-size test files: per-file boundary
//! F1, distribution summaries and a paired sign-flip test.
//!
//! Run with `cargo run --release --example significance`.

use fullstop::classifier::{train_reference, TrainOptions};
use fullstop::metrics::{
    boundaries_from_labels, boundary_score, paired_significance, split_testfiles, summarize, DistributionSummary,
    Resampling,
};
use fullstop::segmenter::{accumulate_votes, decide, SegmenterConfig};
use fullstop::sepp::{strip_labels, SeppDocument};
use fullstop::textprep::{prepare_corpus, split_corpus, PunctMapping, SplitSpec, SplitUnit};

fn corpus() -> String {
    let who = ["Anna", "de buren", "een agent", "oma", "wij allemaal", "de kapper"];
    let what = ["lacht", "fietst", "zingt", "kookt", "leest"];
    // After "graag" comes either a full stop or ", <who> ook.", and the next
    // sentence also starts with <who>, so the model has to guess.
    (0..2400usize)
        .map(|i| {
            let (a, b, c) = (who[i % 6], what[i * 5 % 7 % 5], who[(i * 7 + 1) % 6]);
            match (i * i + i / 3) % 4 {
                0 => format!("{a} {b} graag."),
                1 => format!("{a} {b} graag, {c} ook."),
                2 => format!("{b} {a} echt?"),
                _ => format!("{a} {b} weer"),
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = prepare_corpus(&corpus(), None, &PunctMapping::default())?.document;
    let spec = SplitSpec { train_fraction: 0.75, seed: 5, unit: SplitUnit::Sentence };
    let (train, test) = split_corpus(&[doc], &spec)?;
    let model = train_reference(&train, &TrainOptions { epochs: 1, ..Default::default() })?;

    let mut gold = SeppDocument::default();
    test.into_iter().for_each(|d| gold.extend(d));
    let files = split_testfiles(&gold, 40)?;

    let a = SegmenterConfig { window_words: 30, theta: 0.1, ..Default::default() };
    let b = SegmenterConfig { theta: 0.95, ..a.clone() };
    let (mut fa, mut fb) = (Vec::new(), Vec::new());
    for file in &files {
        let words = strip_labels(file);
        let gold_b = boundaries_from_labels(&file.labels(), a.segmenters);
        // both settings share one classification pass
        let votes = accumulate_votes(&words, &model, &a)?;
        fa.push(boundary_score(&gold_b, &decide(&votes, &a).boundaries, words.len())?.f1);
        fb.push(boundary_score(&gold_b, &decide(&votes, &b).boundaries, words.len())?.f1);
    }

    println!("{}", DistributionSummary::TSV_HEADER);
    println!("{}", summarize(&fa)?.tsv_row("theta=0.1"));
    println!("{}", summarize(&fb)?.tsv_row("theta=0.95"));
    let p = paired_significance(&fa, &fb, Resampling::auto(fa.len(), 10_000, 0))?;
    println!("p = {p:.6} over {} files", files.len());
    Ok(())
}
