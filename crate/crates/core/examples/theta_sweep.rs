//! Classifies once, then re-decides the votes for a range of thresholds.
//!
//! Higher thresholds keep fewer marks: precision tends to rise while recall
//! can only fall.
//!
//! Run with `cargo run --release --example theta_sweep`.

use fullstop::classifier::{train_reference, TrainOptions};
use fullstop::metrics::{boundaries_from_labels, boundary_score};
use fullstop::segmenter::{accumulate_votes, decide, SegmenterConfig};
use fullstop::sepp::{strip_labels, SeppDocument};
use fullstop::textprep::{prepare_corpus, split_corpus, PunctMapping, SplitSpec, SplitUnit};

fn corpus() -> String {
    let names = ["Jan", "Els", "de bakker", "mijn zus", "het team"];
    let verbs = ["komt", "belt", "wacht", "werkt"];
    let tails = ["morgen", "straks", "vandaag", "thuis"];
    let mut out = String::new();
    for (i, n) in names.iter().cycle().take(600).enumerate() {
        let v = verbs[i * 7 % 4];
        let t = tails[i * 3 % 4];
        // no fixed end word here, so the model has to guess
        let line = match i % 3 {
            0 => format!("{n} {v} {t}.\n"),
            1 => format!("{n} {v} {t} en {} {v} ook.\n", names[(i + 2) % 5]),
            _ => format!("{v} {n} {t}?\n"),
        };
        out.push_str(&line);
    }
    out
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = prepare_corpus(&corpus(), None, &PunctMapping::default())?.document;
    let spec = SplitSpec { train_fraction: 0.75, seed: 2, unit: SplitUnit::Sentence };
    let (train, test) = split_corpus(&[doc], &spec)?;
    let model = train_reference(&train, &TrainOptions { epochs: 2, ..Default::default() })?;

    let mut gold = SeppDocument::default();
    test.into_iter().for_each(|d| gold.extend(d));
    let stream = strip_labels(&gold);

    let cfg = SegmenterConfig { window_words: 40, ..Default::default() };
    let votes = accumulate_votes(&stream, &model, &cfg)?;
    let gold_b = boundaries_from_labels(&gold.labels(), cfg.segmenters);

    println!("theta\tpredicted\tprecision\trecall\tf1");
    for theta in [0.0, 0.1, 0.2, 0.4, 0.6, 0.8, 0.95] {
        let d = decide(&votes, &SegmenterConfig { theta, ..cfg.clone() });
        let s = boundary_score(&gold_b, &d.boundaries, stream.len())?;
        println!("{theta}\t{}\t{:.4}\t{:.4}\t{:.4}", d.boundaries.len(), s.precision, s.recall, s.f1);
    }
    Ok(())
}
