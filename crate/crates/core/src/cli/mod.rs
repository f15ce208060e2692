//! Command implementations behind the `fullstop` binary.
//!
//! Everything here is flag-parser agnostic: the binary turns arguments into
//! a [`RunConfig`] plus per-command inputs and calls the functions in
//! [`commands`].

pub mod commands;
mod config;

pub use config::{ClassifierSpec, RunConfig};

use std::path::PathBuf;

use thiserror::Error;

use crate::classifier::{ClassifyError, ModelFileError};
use crate::metrics::MetricsError;
use crate::segmenter::SegmentError;
use crate::sepp::SeppError;
use crate::textprep::PrepError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Sepp {
        path: PathBuf,
        #[source]
        source: SeppError,
    },
    #[error("word streams diverge at index {index}: gold {gold:?}, predicted {pred:?}")]
    WordMismatch { index: usize, gold: String, pred: String },
    #[error(transparent)]
    Prep(#[from] PrepError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Model(#[from] ModelFileError),
    #[error(transparent)]
    Segment(#[from] SegmentError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}
