//! Batch front end for the `ultracone` verifiers.
//!
//! [`run_suite`] runs the selected suites and writes one JSON report;
//! [`verify_certificate`] re-checks a certificate file. Exit statuses are 0
//! when everything holds, 1 when a check or certificate fails and 2 when the
//! input cannot be used.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use thiserror::Error;

pub mod args;
pub mod certificate;
pub mod config;
pub mod report;
mod suites;

pub use certificate::{verify_certificate, Certificate};
pub use config::{Overrides, RunConfig, Suite};
pub use report::{Check, Report, Status, SuiteReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
    #[error("certificate does not recompose: {0}")]
    RecompositionMismatch(String),
    #[error("cannot write {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::RecompositionMismatch(_) => 1,
            _ => 2,
        }
    }
}

/// Runs every selected suite on up to `config.jobs` worker threads and
/// assembles the report in suite order.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    config.validate()?;
    let selected = config.resolved_suites();
    let slots: Vec<Mutex<Option<SuiteReport>>> = selected.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = config.jobs.min(selected.len()).max(1);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(&suite) = selected.get(i) else { break };
                let report = suites::run(suite, config);
                *slots[i].lock().expect("slot lock") = Some(report);
            });
        }
    });
    let reports = slots.into_iter().map(|s| s.into_inner().expect("slot lock").expect("every suite ran")).collect();
    Ok(Report::assemble(config, reports))
}

/// Outcome of [`run_suite`]: the report, the files written and the exit
/// status.
#[derive(Debug)]
pub struct RunOutcome {
    pub report: Report,
    pub written: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.passed() {
            0
        } else {
            1
        }
    }
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
    }
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// `report.json` with series `name` becomes `report.name.csv`.
pub fn series_path(out: &Path, name: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "report".into());
    out.with_file_name(format!("{stem}.{name}.csv"))
}

/// Runs the configured suites and writes the JSON report to `config.out`,
/// plus one CSV per series next to it. The report is written whether or not
/// the checks pass.
pub fn run_suite(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let report = run(config)?;
    write(&config.out, &report.to_json())?;
    let mut written = vec![config.out.clone()];
    for series in report.suites.iter().flat_map(|s| &s.series) {
        let path = series_path(&config.out, &series.name);
        write(&path, &series.csv)?;
        written.push(path);
    }
    Ok(RunOutcome { report, written })
}
