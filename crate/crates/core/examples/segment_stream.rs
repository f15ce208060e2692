//! Sliding-window segmentation of an unpunctuated transcript.
//!
//! The classifier here replays recorded per-word labels, so the example
//! needs no model. With a single window (fewer than 200 words) every label
//! passes the default threshold unchanged; smaller windows show the voting.
//!
//! Run with `cargo run --example segment_stream`.

use fullstop::classifier::ReplayClassifier;
use fullstop::segmenter::{accumulate_votes, segment, LabelSet, SegmenterConfig};
use fullstop::PunctLabel;

const RECORDED: &str = "kijk om je heen , alles beweegt , alles draait . zo komen wij ter wereld . \
de zon , de maan , de planeten en de sterren kijken toe en wij staan in het midden . onze plaats . \
maar Nicolaas Copernicus kwam en stelde dat de Zon in het midden staat en dat wij om haar heen draaien , \
net als de andere planeten . een Aarde die beweegt , maar daar zien en voelen we toch niets van . dat was 1543";

fn recorded() -> (Vec<String>, Vec<PunctLabel>) {
    let mut words = Vec::new();
    let mut labels: Vec<PunctLabel> = Vec::new();
    for tok in RECORDED.split_whitespace() {
        match tok.chars().next().and_then(PunctLabel::from_char) {
            Some(l) if tok.len() == 1 && l != PunctLabel::None => *labels.last_mut().unwrap() = l,
            _ => {
                words.push(tok.to_owned());
                labels.push(PunctLabel::None);
            }
        }
    }
    (words, labels)
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (words, labels) = recorded();
    let replay = ReplayClassifier::new(words.clone(), labels);

    let cfg = SegmenterConfig { theta: 0.1, segmenters: LabelSet::of(&[PunctLabel::Period]), ..Default::default() };
    println!("-- one window, S = {{.}}");
    print!("{}", segment(&words, &replay, &cfg)?.render());

    // With 10-word windows each word collects up to 10 votes.
    let small = SegmenterConfig { window_words: 10, ..cfg };
    let votes = accumulate_votes(&words, &replay, &small)?;
    println!("-- 10-word windows: votes for \"draait\": {} of {}", votes.count(7, PunctLabel::Period), votes.coverage(7));
    Ok(())
}
