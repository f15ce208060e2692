use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Duration;

use super::CliError;
use crate::classifier::{load_model, Classifier, ExternalAdapterConfig, ExternalClassifier, ReplayClassifier};
use crate::segmenter::SegmenterConfig;

/// Where per-token labels come from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassifierSpec {
    /// A model file written by `train`.
    Builtin(PathBuf),
    /// A command line speaking the external line protocol.
    External(String),
    /// A SEPP file whose labels are replayed.
    Replay(PathBuf),
}

impl FromStr for ClassifierSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("classifier {s:?} must look like builtin:<path>, external:<cmd> or replay:<path>"))?;
        if rest.trim().is_empty() {
            return Err(format!("classifier {s:?} is missing its argument"));
        }
        match kind {
            "builtin" => Ok(ClassifierSpec::Builtin(rest.into())),
            "external" => Ok(ClassifierSpec::External(rest.to_owned())),
            "replay" => Ok(ClassifierSpec::Replay(rest.into())),
            other => Err(format!("unknown classifier kind {other:?}")),
        }
    }
}

impl fmt::Display for ClassifierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassifierSpec::Builtin(p) => write!(f, "builtin:{}", p.display()),
            ClassifierSpec::External(c) => write!(f, "external:{c}"),
            ClassifierSpec::Replay(p) => write!(f, "replay:{}", p.display()),
        }
    }
}

/// Settings shared by the classifying commands.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub segmenter: SegmenterConfig,
    pub classifier: Option<ClassifierSpec>,
    pub seed: u64,
    /// Sentences per test file for `significance`.
    pub block_size: usize,
    pub permutations: u64,
    pub external_timeout: Duration,
    pub external_max_restarts: u32,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            segmenter: SegmenterConfig::default(),
            classifier: None,
            seed: 0,
            block_size: 1000,
            permutations: 10_000,
            external_timeout: Duration::from_secs(30),
            external_max_restarts: 2,
        }
    }
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value.parse::<T>().map_err(|e| format!("bad value {value:?} for {key}: {e}"))
}

impl RunConfig {
    /// Sets one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let seg = &mut self.segmenter;
        match key {
            "window" => seg.window_words = parse_value(key, value)?,
            "stride" => seg.stride = parse_value(key, value)?,
            "theta" => seg.theta = parse_value(key, value)?,
            "segmenters" => seg.segmenters = parse_value(key, value)?,
            "pooling" => seg.pooling = parse_value(key, value)?,
            "chunk_token_budget" => seg.chunk_token_budget = parse_value(key, value)?,
            "classifier" => self.classifier = Some(parse_value(key, value)?),
            "seed" => self.seed = parse_value(key, value)?,
            "block_size" => self.block_size = parse_value(key, value)?,
            "permutations" => self.permutations = parse_value(key, value)?,
            "timeout" => {
                let secs: f64 = parse_value(key, value)?;
                if !(secs > 0.0 && secs.is_finite()) {
                    return Err(format!("timeout must be positive, got {value}"));
                }
                self.external_timeout = Duration::from_secs_f64(secs);
            }
            "max_restarts" => self.external_max_restarts = parse_value(key, value)?,
            other => return Err(format!("unknown key {other:?}")),
        }
        Ok(())
    }

    /// Applies a line-oriented `key = value` file; `#` starts a comment.
    pub fn apply_file_text(&mut self, text: &str) -> Result<(), CliError> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| CliError::Config { line: i + 1, message };
            let (key, value) = line.split_once('=').ok_or_else(|| err("expected key = value".into()))?;
            self.set(key.trim(), value.trim()).map_err(err)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = RunConfig::default();
        cfg.apply_file_text(&text)?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.segmenter.validate()?;
        match &self.classifier {
            None => return Err(CliError::Usage("no classifier given (use --classifier)".into())),
            Some(ClassifierSpec::Builtin(p)) | Some(ClassifierSpec::Replay(p)) if !p.is_file() => {
                return Err(CliError::Usage(format!("classifier file {} does not exist", p.display())));
            }
            _ => {}
        }
        Ok(())
    }

    /// Builds the configured classifier.
    pub fn build_classifier(&self) -> Result<Box<dyn Classifier>, CliError> {
        self.validate()?;
        Ok(match self.classifier.as_ref().expect("validated") {
            ClassifierSpec::Builtin(p) => Box::new(load_model(p)?),
            ClassifierSpec::Replay(p) => {
                let doc = super::commands::read_sepp(p)?;
                Box::new(ReplayClassifier::from_document(&doc))
            }
            ClassifierSpec::External(cmd) => {
                let mut cfg = ExternalAdapterConfig::from_command_line(cmd).map_err(CliError::Usage)?;
                cfg.timeout = self.external_timeout;
                cfg.max_restarts = self.external_max_restarts;
                Box::new(ExternalClassifier::new(cfg).map_err(CliError::Usage)?)
            }
        })
    }

    /// True when both configurations produce identical vote tables.
    pub fn same_votes(&self, other: &RunConfig) -> bool {
        self.classifier == other.classifier
            && self.segmenter.window_words == other.segmenter.window_words
            && self.segmenter.stride == other.segmenter.stride
            && self.segmenter.chunk_token_budget == other.segmenter.chunk_token_budget
    }
}
