//! Command-line front end: configuration, the coefficient cache, the
//! verification suites and their result files.

pub mod cache;
pub mod config;
mod lock;
pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::Parser;
use thiserror::Error;

pub use cache::{cache_read, cache_write, CacheError};
pub use config::{Args, Overrides, RunConfig, Suite, SuiteSelection, CACHE_ENV};
pub use output::{RunResults, SCHEMA_VERSION};
pub use suites::{Check, SuiteReport};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error("output directory {dir} is in use by another run (lock file {lock}); remove the lock if no run is active")]
    Locked { dir: PathBuf, lock: PathBuf },
    #[error("{0}")]
    Io(String),
    /// A computation failed outright; reported as a failed check.
    #[error("{0}")]
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute(_) => 1,
            _ => 2,
        }
    }
}

/// A finished run: results as written to disk and per-suite wall times.
#[derive(Debug)]
pub struct RunOutcome {
    pub results: RunResults,
    pub elapsed: Vec<(Suite, Duration)>,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        if self.results.pass {
            0
        } else {
            1
        }
    }
}

/// Runs the selected suites and writes `results.json`, one CSV per table,
/// `summary.txt` and `config.resolved` into the output directory.
pub fn run(cfg: &RunConfig) -> Result<RunOutcome, CliError> {
    let selected = cfg.suite.suites();
    if selected.is_empty() {
        return Err(CliError::Config("no suite selected".into()));
    }
    for &s in &selected {
        if let Some((need, what)) = suites::table_requirement(s, cfg) {
            if need > cfg.n_max {
                return Err(CliError::Config(format!(
                    "{what} needs a {} coefficient table with n_max >= {need}; the configured n_max is {}",
                    cfg.form, cfg.n_max
                )));
            }
        }
    }

    std::fs::create_dir_all(&cfg.out).map_err(|e| CliError::Io(format!("output directory {}: {e}", cfg.out.display())))?;
    let _lock = lock::OutputLock::acquire(&cfg.out)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let ctx = suites::Context::new(cfg);
    let mut reports = Vec::new();
    let mut elapsed = Vec::new();
    for s in selected {
        let start = Instant::now();
        let report = match pool.install(|| suites::run_suite(&ctx, s)) {
            Ok(r) => r,
            Err(CliError::Compute(msg)) => failed_suite(s, cfg, msg),
            Err(e) => return Err(e),
        };
        elapsed.push((s, start.elapsed()));
        reports.push(report);
    }
    let results = RunResults::new(cfg, reports);
    output::write_all(&cfg.out, &results, &elapsed)?;
    Ok(RunOutcome { results, elapsed })
}

fn failed_suite(s: Suite, cfg: &RunConfig, msg: String) -> SuiteReport {
    SuiteReport {
        suite: s.name().into(),
        form: Some(cfg.form.to_string()),
        checks: vec![Check { name: "error".into(), pass: false, hard: true, summary: msg, values: serde_json::Value::Null }],
        tables: vec![],
    }
}

/// Parses arguments, runs, reports on stdout/stderr and returns the exit
/// status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if args.csv_columns {
        print!("{}", suites::csv_columns_help());
        return 0;
    }
    let result = args.resolve(std::env::var(CACHE_ENV).ok()).and_then(|cfg| run(&cfg));
    match result {
        Ok(outcome) => {
            print!("{}", output::summary(&outcome.results, &outcome.elapsed));
            for f in &outcome.results.failed {
                eprintln!("bdlab: check failed: {f}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("bdlab: {e}");
            e.exit_code()
        }
    }
}
