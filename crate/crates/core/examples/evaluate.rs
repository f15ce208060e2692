//! Scores predicted labels against gold: per-class report, confusion
//! matrix and sentence-boundary precision/recall.
//!
//! Run with `cargo run --example evaluate [gold.sepp pred.sepp]`.

use fullstop::metrics::{boundaries_from_labels, boundary_score, report, ConfusionMatrix};
use fullstop::sepp::parse_sepp;
use fullstop::{LabelSet, PunctLabel};

const GOLD: &str = "kijk\t0\t0\nom\t0\t0\nje\t0\t0\nheen\t1\t.\nalles\t0\t0\nbeweegt\t0\t,\nalles\t0\t0\ndraait\t1\t.\n\
zo\t0\t0\nkomen\t0\t0\nwij\t0\t0\nter\t0\t0\nwereld\t1\t?\n";
const PRED: &str = "kijk\t0\t0\nom\t0\t0\nje\t0\t0\nheen\t0\t,\nalles\t0\t0\nbeweegt\t0\t,\nalles\t0\t0\ndraait\t1\t.\n\
zo\t0\t0\nkomen\t0\t0\nwij\t0\t0\nter\t0\t0\nwereld\t1\t.\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (gold, pred) = match args.as_slice() {
        [g, p] => (parse_sepp(&std::fs::read_to_string(g)?)?, parse_sepp(&std::fs::read_to_string(p)?)?),
        _ => (parse_sepp(GOLD)?, parse_sepp(PRED)?),
    };

    let cm = ConfusionMatrix::compute(&gold.labels(), &pred.labels())?;
    print!("{}", report(&cm)?.to_text());
    println!();
    print!("{}", cm.to_tsv());

    for s in [LabelSet::of(&[PunctLabel::Period]), LabelSet::of(&[PunctLabel::Period, PunctLabel::Question])] {
        let score = boundary_score(
            &boundaries_from_labels(&gold.labels(), s),
            &boundaries_from_labels(&pred.labels(), s),
            gold.len(),
        )?;
        println!("S={s}\tP {:.4}\tR {:.4}\tF1 {:.4}", score.precision, score.recall, score.f1);
    }
    Ok(())
}
