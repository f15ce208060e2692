//! Raw punctuated text to SEPP rows, plus a seeded train/test split.
//!
//! Run with `cargo run --example prepare_corpus [raw.txt]`; the input holds
//! one sentence per line.

use fullstop::sepp::write_sepp;
use fullstop::textprep::{prepare_corpus, split_corpus, PunctMapping, SplitSpec, SplitUnit};

const RAW: &str = "\
Kijk om je heen, alles beweegt.
De Zon staat in het midden: wij draaien.
Zo'n kijker moet foto's nemen - nauwkeurig!
Wat zien we daar van?
<p class=\"note\">
Dat was 1543.
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let raw = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => RAW.to_owned(),
    };

    let prepared = prepare_corpus(&raw, None, &PunctMapping::default())?;
    for w in &prepared.warnings {
        eprintln!("warning: {w}");
    }
    println!("# {} sentences, {} truecase keys", prepared.sentences, prepared.truecaser.len());
    print!("{}", write_sepp(&prepared.document));

    let spec = SplitSpec { train_fraction: 0.75, seed: 1, unit: SplitUnit::Sentence };
    let (train, test) = split_corpus(&[prepared.document], &spec)?;
    println!("# split: {} train, {} test sentences", train.len(), test.len());
    Ok(())
}
