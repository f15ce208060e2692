//! Drives a classifier that runs as a child process.
//!
//! Any program that reads one space-separated window per line and answers
//! one line of labels from "0.,?:-" will do. Without arguments a small shell
//! script stands in for a model; otherwise the arguments are the command:
//!
//! `cargo run --example external_classifier -- python3 serve_model.py`

use std::time::Duration;

use fullstop::classifier::{ExternalAdapterConfig, ExternalClassifier};
use fullstop::segmenter::{segment, SegmenterConfig};

// Puts a full stop after "heen" and "wereld", a comma after "beweegt".
const STUB: &str = r#"while IFS= read -r line; do
  out=""
  for w in $line; do
    case "$w" in
      heen|wereld) out="$out ." ;;
      beweegt) out="$out ," ;;
      *) out="$out 0" ;;
    esac
  done
  echo "${out# }"
done"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let command = if args.is_empty() { vec!["sh".to_owned(), "-c".to_owned(), STUB.to_owned()] } else { args };

    let mut cfg = ExternalAdapterConfig::new(command);
    cfg.timeout = Duration::from_secs(10);
    cfg.max_restarts = 1;
    let classifier = ExternalClassifier::new(cfg)?;

    let stream: Vec<String> = "kijk om je heen alles beweegt zo komen wij ter wereld en daar blijven we"
        .split(' ')
        .map(str::to_owned)
        .collect();
    let seg = SegmenterConfig { window_words: 6, ..Default::default() };
    print!("{}", segment(&stream, &classifier, &seg)?.render());
    Ok(())
}
