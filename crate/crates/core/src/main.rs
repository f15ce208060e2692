use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use fullstop::classifier::TrainOptions;
use fullstop::cli::commands::{self, read_sepp, read_stream, write_text};
use fullstop::cli::{ClassifierSpec, CliError, RunConfig};
use fullstop::segmenter::{LabelSet, Pooling};
use fullstop::sepp::write_sepp;
use fullstop::textprep::{SplitSpec, SplitUnit};

#[derive(Parser)]
#[command(name = "fullstop", version, about = "Punctuation restoration and segmentation of word streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by the classifying commands; they override `--config`.
#[derive(Args, Clone, Default)]
struct RunFlags {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    window: Option<usize>,
    #[arg(long)]
    stride: Option<usize>,
    #[arg(long)]
    theta: Option<f64>,
    /// Segment-ending labels, e.g. ".?"
    #[arg(long)]
    segmenters: Option<LabelSet>,
    #[arg(long)]
    pooling: Option<Pooling>,
    /// builtin:<model> | external:<command> | replay:<sepp>
    #[arg(long)]
    classifier: Option<ClassifierSpec>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    chunk_token_budget: Option<usize>,
}

impl RunFlags {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut run = match &self.config {
            Some(p) => RunConfig::from_file(p)?,
            None => RunConfig::default(),
        };
        let seg = &mut run.segmenter;
        if let Some(v) = self.window {
            seg.window_words = v;
        }
        if let Some(v) = self.stride {
            seg.stride = v;
        }
        if let Some(v) = self.theta {
            seg.theta = v;
        }
        if let Some(v) = self.segmenters {
            seg.segmenters = v;
        }
        if let Some(v) = self.pooling {
            seg.pooling = v;
        }
        if let Some(v) = self.chunk_token_budget {
            seg.chunk_token_budget = v;
        }
        if let Some(v) = &self.classifier {
            run.classifier = Some(v.clone());
        }
        if let Some(v) = self.seed {
            run.seed = v;
        }
        Ok(run)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Unit {
    Document,
    Sentence,
}

#[derive(Subcommand)]
enum Command {
    /// Raw text (one sentence per line) to SEPP.
    Prepare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Apply this truecase model instead of training one on the input.
        #[arg(long)]
        truecase_model: Option<PathBuf>,
        #[arg(long)]
        save_truecaser: Option<PathBuf>,
    },
    /// Seeded train/test split of SEPP files.
    Split {
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        train: PathBuf,
        #[arg(long)]
        test: PathBuf,
        #[arg(long, default_value_t = 0.75)]
        fraction: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Unit::Document)]
        unit: Unit,
    },
    /// Train the built-in averaged perceptron.
    Train {
        #[arg(long = "input", required = true)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 5)]
        epochs: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        window: usize,
    },
    /// Label a stream in consecutive windows, without voting.
    Classify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Sliding-window segmentation of a word stream.
    Segment {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the predicted labels as SEPP.
        #[arg(long)]
        emit_sepp: Option<PathBuf>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Per-class label scores and confusion matrix.
    EvalLabels {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long)]
        report_tsv: Option<PathBuf>,
        #[arg(long)]
        confusion_tsv: Option<PathBuf>,
    },
    /// Boundary precision, recall and F1.
    EvalBoundaries {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        pred: PathBuf,
        #[arg(long, default_value = ".?")]
        segmenters: LabelSet,
    },
    /// Boundary scores over a list of thresholds from one classification pass.
    Sweep {
        #[arg(long)]
        gold: PathBuf,
        /// Comma-separated, e.g. 0.1,0.2,0.3
        #[arg(long, value_delimiter = ',', required = true)]
        thetas: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        run: RunFlags,
    },
    /// Compare two configurations over fixed-size test files.
    Significance {
        #[arg(long)]
        gold: PathBuf,
        #[arg(long)]
        config_a: PathBuf,
        #[arg(long)]
        config_b: PathBuf,
        #[arg(long)]
        block_size: Option<usize>,
        #[arg(long)]
        permutations: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Per-file scores for plotting.
        #[arg(long)]
        scores_out: Option<PathBuf>,
    },
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Prepare { input, output, truecase_model, save_truecaser } => {
            let s = commands::prepare(&input, &output, truecase_model.as_deref(), save_truecaser.as_deref())?;
            for w in &s.warnings {
                eprintln!("warning: {w}");
            }
            println!("sentences\t{}\ntokens\t{}", s.sentences, s.tokens);
        }
        Command::Split { inputs, train, test, fraction, seed, unit } => {
            let unit = match unit {
                Unit::Document => SplitUnit::Document,
                Unit::Sentence => SplitUnit::Sentence,
            };
            let spec = SplitSpec { train_fraction: fraction, seed, unit };
            let (n_train, n_test) = commands::split(&inputs, &spec, &train, &test)?;
            println!("train\t{n_train}\ntest\t{n_test}");
        }
        Command::Train { inputs, output, epochs, seed, window } => {
            let features = commands::train(&inputs, &TrainOptions { epochs, seed, window_words: window }, &output)?;
            println!("features\t{features}");
        }
        Command::Classify { input, output, run } => {
            let doc = commands::classify(&read_stream(&input)?, &run.resolve()?)?;
            emit(output.as_deref(), &write_sepp(&doc))?;
        }
        Command::Segment { input, output, emit_sepp, run } => {
            let text = commands::segment(&read_stream(&input)?, &run.resolve()?)?;
            if let Some(p) = emit_sepp {
                write_text(&p, &write_sepp(&text.to_sepp()))?;
            }
            emit(output.as_deref(), &text.render())?;
        }
        Command::EvalLabels { gold, pred, report_tsv, confusion_tsv } => {
            let (report, cm) = commands::eval_labels(&read_sepp(&gold)?, &read_sepp(&pred)?)?;
            if let Some(p) = report_tsv {
                write_text(&p, &report.to_tsv())?;
            }
            if let Some(p) = confusion_tsv {
                write_text(&p, &cm.to_tsv())?;
            }
            print!("{}", report.to_text());
        }
        Command::EvalBoundaries { gold, pred, segmenters } => {
            let score = commands::eval_boundaries(&read_sepp(&gold)?, &read_sepp(&pred)?, segmenters)?;
            print!("{}", commands::boundary_score_tsv(&score));
        }
        Command::Sweep { gold, thetas, output, run } => {
            let rows = commands::sweep(&read_sepp(&gold)?, &run.resolve()?, &thetas)?;
            emit(output.as_deref(), &commands::sweep_tsv(&rows))?;
        }
        Command::Significance { gold, config_a, config_b, block_size, permutations, seed, output, scores_out } => {
            let mut a = RunConfig::from_file(&config_a)?;
            let mut b = RunConfig::from_file(&config_b)?;
            for cfg in [&mut a, &mut b] {
                if let Some(n) = permutations {
                    cfg.permutations = n;
                }
                if let Some(s) = seed {
                    cfg.seed = s;
                }
            }
            let block = block_size.unwrap_or(a.block_size);
            let result = commands::significance(&read_sepp(&gold)?, &a, &b, block)?;
            if let Some(p) = scores_out {
                write_text(&p, &result.scores_tsv())?;
            }
            emit(output.as_deref(), &result.to_tsv())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                CliError::Usage(_) => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
