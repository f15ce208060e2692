//! Reads, checks and writes the three-column SEPP format.
//!
//! Run with `cargo run --example sepp_roundtrip [file.sepp]`.

use fullstop::sepp::{parse_sepp_with, strip_labels, write_sepp, ParseOptions};

// "openen" is printed with flag 0 here, as in many hand-made tables.
const FRAGMENT: &str = "doos\t0\t0\nvan\t0\t0\npandora\t0\t0\nzouden\t0\t0\nopenen\t0\t.\nhoe\t0\t0\n\
op\t0\t0\nde\t0\t0\nvolgende\t0\t0\nvraag\t0\t:\nkunnen\t0\t0\n";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path)?,
        None => FRAGMENT.to_owned(),
    };

    let parsed = parse_sepp_with(&text, ParseOptions::default())?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = parse_sepp_with(&text, ParseOptions { strict: true }) {
        eprintln!("strict parse: {e}");
    }

    let doc = parsed.document;
    println!("{} tokens, {} sentences", doc.len(), doc.sentence_count());
    println!("words: {}", strip_labels(&doc).join(" "));

    // The writer derives the flag from `.` so the output is consistent.
    print!("{}", write_sepp(&doc));
    Ok(())
}
