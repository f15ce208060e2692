//! Adapter for classifiers running in a child process.
//!
//! Protocol, one exchange per window, UTF-8, LF terminated:
//!
//! ```text
//! -> kijk om je heen
//! <- 0 0 0 .
//! ```
//!
//! The child must answer every request with exactly one line and flush it.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use super::{check_length, Classifier, ClassifyError};
use crate::sepp::PunctLabel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalAdapterConfig {
    /// Program followed by its arguments.
    pub command: Vec<String>,
    pub timeout: Duration,
    /// How many times a dead child is respawned within one request.
    pub max_restarts: u32,
    pub max_window_words: Option<usize>,
}

impl ExternalAdapterConfig {
    pub fn new(command: Vec<String>) -> Self {
        ExternalAdapterConfig {
            command,
            timeout: Duration::from_secs(30),
            max_restarts: 2,
            max_window_words: None,
        }
    }

    /// Splits a shell-style command line (quotes are honored).
    pub fn from_command_line(line: &str) -> Result<Self, String> {
        match shlex::split(line) {
            Some(parts) if !parts.is_empty() => Ok(ExternalAdapterConfig::new(parts)),
            _ => Err(format!("cannot parse command line {line:?}")),
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        if self.command.is_empty() {
            return Err("external classifier command is empty".into());
        }
        if self.timeout.is_zero() {
            return Err("external classifier timeout must be positive".into());
        }
        Ok(())
    }
}

struct Worker {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
}

impl Worker {
    fn spawn(cfg: &ExternalAdapterConfig) -> Result<Worker, ClassifyError> {
        let mut child = Command::new(&cfg.command[0])
            .args(&cfg.command[1..])
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| ClassifyError::ProcessDied(format!("cannot spawn {:?}: {e}", cfg.command[0])))?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                let stop = line.is_err();
                if tx.send(line).is_err() || stop {
                    break;
                }
            }
        });
        Ok(Worker { child, stdin, lines: rx })
    }

    fn kill(mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

enum Attempt {
    Done(String),
    Died(String),
    TimedOut,
}

/// Classifier backed by a child process; requests are serialized.
pub struct ExternalClassifier {
    cfg: ExternalAdapterConfig,
    name: String,
    worker: Mutex<Option<Worker>>,
}

impl ExternalClassifier {
    /// The child is started lazily on the first request.
    pub fn new(cfg: ExternalAdapterConfig) -> Result<Self, String> {
        cfg.validate()?;
        let name = format!("external:{}", cfg.command.join(" "));
        Ok(ExternalClassifier { cfg, name, worker: Mutex::new(None) })
    }

    pub fn config(&self) -> &ExternalAdapterConfig {
        &self.cfg
    }

    fn exchange(worker: &mut Worker, request: &str, timeout: Duration) -> Attempt {
        if let Err(e) = worker.stdin.write_all(request.as_bytes()).and_then(|_| worker.stdin.flush()) {
            return Attempt::Died(format!("write failed: {e}"));
        }
        match worker.lines.recv_timeout(timeout) {
            Ok(Ok(line)) => Attempt::Done(line),
            Ok(Err(e)) => Attempt::Died(format!("read failed: {e}")),
            Err(RecvTimeoutError::Disconnected) => Attempt::Died("child closed its output".into()),
            Err(RecvTimeoutError::Timeout) => Attempt::TimedOut,
        }
    }

    fn request(&self, request: &str) -> Result<String, ClassifyError> {
        let mut guard = self.worker.lock().unwrap_or_else(|p| p.into_inner());
        let mut restarts = 0;
        loop {
            if guard.is_none() {
                *guard = Some(Worker::spawn(&self.cfg)?);
            }
            let worker = guard.as_mut().expect("worker present");
            match Self::exchange(worker, request, self.cfg.timeout) {
                Attempt::Done(line) => return Ok(line),
                Attempt::TimedOut => {
                    // A late answer would desynchronize the stream; start over.
                    guard.take().expect("worker present").kill();
                    return Err(ClassifyError::Timeout(self.cfg.timeout));
                }
                Attempt::Died(reason) => {
                    guard.take().expect("worker present").kill();
                    if restarts >= self.cfg.max_restarts {
                        return Err(ClassifyError::ProcessDied(reason));
                    }
                    restarts += 1;
                }
            }
        }
    }
}

impl Drop for ExternalClassifier {
    fn drop(&mut self) {
        let slot = self.worker.get_mut().unwrap_or_else(|p| p.into_inner());
        if let Some(w) = slot.take() {
            w.kill();
        }
    }
}

/// Parses a response line into labels.
pub(crate) fn parse_response(line: &str) -> Result<Vec<PunctLabel>, ClassifyError> {
    let line = line.strip_suffix('\r').unwrap_or(line);
    if line.is_empty() {
        return Ok(Vec::new());
    }
    line.split(' ')
        .map(|s| s.parse::<PunctLabel>().map_err(|_| ClassifyError::BadLabel(s.to_owned())))
        .collect()
}

impl Classifier for ExternalClassifier {
    fn name(&self) -> &str {
        &self.name
    }

    fn max_window_words(&self) -> Option<usize> {
        self.cfg.max_window_words
    }

    fn classify(&self, window: &[String]) -> Result<Vec<PunctLabel>, ClassifyError> {
        if window.is_empty() {
            return Err(ClassifyError::EmptyWindow);
        }
        if let Some(bad) = window.iter().find(|w| w.is_empty() || w.contains(char::is_whitespace)) {
            return Err(ClassifyError::BadWord(bad.clone()));
        }
        let mut request = window.join(" ");
        request.push('\n');
        let labels = parse_response(&self.request(&request)?)?;
        check_length(window.len(), &labels)?;
        Ok(labels)
    }
}
