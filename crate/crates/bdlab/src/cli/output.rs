//! Result files. Numbers go through `serde_json` (shortest round-trip
//! formatting), so identical runs give byte-identical JSON; wall times
//! appear only in the summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Duration;

use serde::Serialize;

use super::config::{RunConfig, Suite};
use super::suites::SuiteReport;
use super::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct RunResults {
    pub schema_version: u32,
    pub tool_version: String,
    pub config: BTreeMap<String, String>,
    pub suites: Vec<SuiteReport>,
    /// True when every hard check passed.
    pub pass: bool,
    /// Failed hard checks as `suite/check`.
    pub failed: Vec<String>,
}

impl RunResults {
    pub fn new(cfg: &RunConfig, suites: Vec<SuiteReport>) -> Self {
        let failed: Vec<String> = suites.iter().flat_map(|s| s.failures()).collect();
        RunResults {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            config: cfg.resolved().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            suites,
            pass: failed.is_empty(),
            failed,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("results serialize") + "\n"
    }
}

pub fn summary(results: &RunResults, elapsed: &[(Suite, Duration)]) -> String {
    let mut s = String::new();
    for (rep, (_, t)) in results.suites.iter().zip(elapsed) {
        let form = rep.form.as_deref().map(|f| format!(" [{f}]")).unwrap_or_default();
        let _ = writeln!(s, "{}{form} ({:.1} s)", rep.suite, t.as_secs_f64());
        for c in &rep.checks {
            let mark = match (c.pass, c.hard) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "warn",
            };
            let _ = writeln!(s, "  {mark} {}: {}", c.name, c.summary);
        }
    }
    let _ = writeln!(s, "{}", if results.pass { "all hard checks passed" } else { "FAILED" });
    s
}

fn csv(columns: &[&str], rows: &[Vec<f64>]) -> String {
    let mut s = columns.join(",") + "\n";
    for r in rows {
        let line: Vec<String> = r.iter().map(|x| format!("{x:e}")).collect();
        s += &line.join(",");
        s.push('\n');
    }
    s
}

pub fn write_all(dir: &Path, results: &RunResults, elapsed: &[(Suite, Duration)]) -> Result<(), CliError> {
    let put = |name: &str, text: &str| {
        fs::write(dir.join(name), text).map_err(|e| CliError::Io(format!("{}: {e}", dir.join(name).display())))
    };
    put("results.json", &results.to_json())?;
    for rep in &results.suites {
        for t in &rep.tables {
            put(&format!("{}.{}.csv", rep.suite, t.name), &csv(t.columns, &t.rows))?;
        }
    }
    put("summary.txt", &summary(results, elapsed))?;
    let resolved: String = results.config.iter().map(|(k, v)| format!("{k} = {v}\n")).collect();
    put("config.resolved", &resolved)
}
