//! Trains the built-in averaged perceptron, saves it and labels a window.
//!
//! Run with `cargo run --release --example train_reference`.

use fullstop::classifier::{load_model, save_model, train_reference, Classifier, TrainOptions};
use fullstop::sepp::SeppDocument;
use fullstop::textprep::{prepare_corpus, PunctMapping};
use fullstop::PunctLabel;

fn corpus() -> String {
    let subjects = ["de kat", "mijn buurman", "een oude man", "de leraar", "het kind"];
    let objects = ["de krant", "een appel", "het boek", "de fiets"];
    let mut lines = Vec::new();
    for (i, s) in subjects.iter().enumerate() {
        for (j, o) in objects.iter().enumerate() {
            lines.push(format!("{s} leest {o} vandaag."));
            lines.push(format!("waar ligt {o} nu?"));
            if (i + j) % 2 == 0 {
                lines.push(format!("{s} slaapt, en {o} ligt op tafel."));
            }
        }
    }
    lines.join("\n")
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = prepare_corpus(&corpus(), None, &PunctMapping::default())?.document;
    // one document per sentence, as a split would produce
    let docs: Vec<SeppDocument> = doc.sentences().into_iter().map(|s| SeppDocument::new(s.to_vec())).collect();

    let model = train_reference(&docs, &TrainOptions { epochs: 5, seed: 7, window_words: 200 })?;
    println!("trained on {} sentences, {} active features", docs.len(), model.active_features());

    let path = std::env::temp_dir().join("fullstop-example.fslm");
    save_model(&model, &path)?;
    let model = load_model(&path)?;

    let window: Vec<String> = "het kind leest de krant vandaag waar ligt het boek nu"
        .split(' ')
        .map(str::to_owned)
        .collect();
    let labels = model.classify(&window)?;
    let rendered: Vec<String> = window
        .iter()
        .zip(&labels)
        .map(|(w, l)| if *l == PunctLabel::None { w.clone() } else { format!("{w}{l}") })
        .collect();
    println!("{}", rendered.join(" "));
    std::fs::remove_file(path)?;
    Ok(())
}
