//! Run configuration from flags, a `key=value` file and the environment.
//!
//! Precedence, lowest first: built-in defaults, `BDLAB_CACHE` for the cache
//! directory, the config file, command-line flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::Parser;
use serde::Serialize;

use super::CliError;
use crate::forms::FormLabel;

/// Environment variable naming the default cache directory.
pub const CACHE_ENV: &str = "BDLAB_CACHE";

/// Largest coefficient table a run builds unless `n_max` says otherwise.
pub const DEFAULT_N_MAX: usize = 300_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    FormsCheck,
    SpecialCheck,
    QuadAppendix,
    BesselAsymptotics,
    DeltaIdentity,
    Voronoi,
    PoissonStep,
    Decomposition,
    BoundLedger,
    Sumscan,
    Lvalue,
    Weylscan,
}

impl Suite {
    pub const ALL: [Suite; 12] = [
        Suite::FormsCheck,
        Suite::SpecialCheck,
        Suite::QuadAppendix,
        Suite::BesselAsymptotics,
        Suite::DeltaIdentity,
        Suite::Voronoi,
        Suite::PoissonStep,
        Suite::Decomposition,
        Suite::BoundLedger,
        Suite::Sumscan,
        Suite::Lvalue,
        Suite::Weylscan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::FormsCheck => "forms-check",
            Suite::SpecialCheck => "special-check",
            Suite::QuadAppendix => "quad-appendix",
            Suite::BesselAsymptotics => "bessel-asymptotics",
            Suite::DeltaIdentity => "delta-identity",
            Suite::Voronoi => "voronoi",
            Suite::PoissonStep => "poisson-step",
            Suite::Decomposition => "decomposition",
            Suite::BoundLedger => "bound-ledger",
            Suite::Sumscan => "sumscan",
            Suite::Lvalue => "lvalue",
            Suite::Weylscan => "weylscan",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What `--suite` selects: one suite, all of them, or nothing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuiteSelection {
    None,
    One(Suite),
    All,
}

impl SuiteSelection {
    pub fn suites(self) -> Vec<Suite> {
        match self {
            SuiteSelection::None => vec![],
            SuiteSelection::One(s) => vec![s],
            SuiteSelection::All => Suite::ALL.to_vec(),
        }
    }
}

impl FromStr for SuiteSelection {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(SuiteSelection::None),
            "all" => Ok(SuiteSelection::All),
            _ => Suite::ALL.iter().find(|x| x.name() == s).map(|&x| SuiteSelection::One(x)).ok_or_else(|| {
                let names: Vec<&str> = Suite::ALL.iter().map(|x| x.name()).collect();
                format!("unknown suite {s:?}; expected one of {}, all, none", names.join(", "))
            }),
        }
    }
}

impl fmt::Display for SuiteSelection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SuiteSelection::None => f.write_str("none"),
            SuiteSelection::All => f.write_str("all"),
            SuiteSelection::One(s) => f.write_str(s.name()),
        }
    }
}

/// Per-suite numeric overrides; `None` keeps the suite's default.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Overrides {
    pub n: Option<f64>,
    pub t: Option<f64>,
    pub k: Option<f64>,
    pub p: Option<f64>,
    pub t_grid: Option<Vec<f64>>,
    pub tol: Option<f64>,
}

/// A fully resolved run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub form: FormLabel,
    pub suite: SuiteSelection,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
    pub threads: usize,
    pub epsilon: f64,
    pub n_max: usize,
    pub overrides: Overrides,
}

impl RunConfig {
    /// Defaults: Δ, no suite, output to `bdlab-out`, one thread.
    pub fn new(suite: SuiteSelection) -> Self {
        RunConfig {
            form: FormLabel::Delta,
            suite,
            out: PathBuf::from("bdlab-out"),
            cache: None,
            threads: 1,
            epsilon: 0.05,
            n_max: DEFAULT_N_MAX,
            overrides: Overrides::default(),
        }
    }

    /// Applies one `key=value` setting; the same keys as the long flags,
    /// with `-` or `_` accepted in `t-grid` and `n-max`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let bad = |e: String| CliError::Config(format!("{key}: {e}"));
        let num = |v: &str| v.trim().parse::<f64>().map_err(|e| bad(format!("{v:?}: {e}")));
        let o = &mut self.overrides;
        match key.replace('_', "-").as_str() {
            "form" => self.form = value.parse().map_err(|e: crate::forms::FormsError| bad(e.to_string()))?,
            "suite" => self.suite = value.parse().map_err(bad)?,
            "out" => self.out = PathBuf::from(value),
            "cache" => self.cache = Some(PathBuf::from(value)),
            "threads" => {
                self.threads = value.parse().map_err(|e| bad(format!("{value:?}: {e}")))?;
                if self.threads == 0 {
                    return Err(bad("must be at least 1".into()));
                }
            }
            "epsilon" => {
                self.epsilon = num(value)?;
                if !(self.epsilon > 0.0 && self.epsilon < 0.5) {
                    return Err(bad(format!("{} outside (0, 1/2)", self.epsilon)));
                }
            }
            "n-max" => self.n_max = value.parse().map_err(|e| bad(format!("{value:?}: {e}")))?,
            "tol" => o.tol = Some(positive(num(value)?).map_err(bad)?),
            "n" => o.n = Some(positive(num(value)?).map_err(bad)?),
            "t" => o.t = Some(positive(num(value)?).map_err(bad)?),
            "k" => o.k = Some(positive(num(value)?).map_err(bad)?),
            "p" => o.p = Some(positive(num(value)?).map_err(bad)?),
            "t-grid" => {
                let grid = value.split(',').map(|v| num(v).and_then(|x| positive(x).map_err(bad))).collect::<Result<Vec<_>, _>>()?;
                if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(bad("needs at least two increasing values".into()));
                }
                o.t_grid = Some(grid);
            }
            _ => return Err(CliError::Config(format!("unknown config key {key:?}"))),
        }
        Ok(())
    }

    /// Reads `key = value` lines; `#` starts a comment.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("config file {}: {e}", path.display())))?;
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("{}:{}: expected key=value, got {line:?}", path.display(), i + 1)))?;
            self.set(k.trim(), v.trim()).map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        }
        Ok(())
    }

    /// Every key with its resolved value, in a fixed order; unset optional
    /// overrides are omitted. Feeding this back through [`RunConfig::set`]
    /// reproduces the run.
    pub fn resolved(&self) -> Vec<(&'static str, String)> {
        let mut v = vec![
            ("form", self.form.to_string()),
            ("suite", self.suite.to_string()),
            ("out", self.out.display().to_string()),
        ];
        if let Some(c) = &self.cache {
            v.push(("cache", c.display().to_string()));
        }
        v.push(("threads", self.threads.to_string()));
        v.push(("epsilon", self.epsilon.to_string()));
        v.push(("n_max", self.n_max.to_string()));
        let o = &self.overrides;
        for (k, x) in [("n", o.n), ("t", o.t), ("k", o.k), ("p", o.p), ("tol", o.tol)] {
            if let Some(x) = x {
                v.push((k, x.to_string()));
            }
        }
        if let Some(g) = &o.t_grid {
            v.push(("t_grid", g.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")));
        }
        v
    }
}

fn positive(x: f64) -> Result<f64, String> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("{x} is not a positive number"))
    }
}

const AFTER_HELP: &str = "\
Every flag can also be given as `key = value` in the --config file (t_grid and
n_max accept `_` or `-`). Flags override the file; the file overrides
BDLAB_CACHE. Per-suite overrides:
  voronoi          n = bump scale Y, tol = residual threshold (1e-6)
  poisson-step     n = N, t = T for every configuration, tol = threshold (1e-5)
  decomposition    n = N, t = T, k = K, p = P of the stated-parameter run
  delta-identity   n = N, p = prime, epsilon
  bound-ledger     n = restricts the theorem grid to one N
  sumscan          n = N of the Wilton scan
  lvalue           t_grid, tol = cutoff agreement threshold (1e-6)
  weylscan         t_grid

Exit status: 0 when every hard check passes, 1 when a check fails (named on
stderr), 2 for configuration, cache or lock errors.";

/// Command-line flags. All optional; see [`RunConfig`] for defaults.
#[derive(Debug, Parser)]
#[command(name = "bdlab", version, about = "Numerical checks for the Bessel delta-method on GL(2) exponential sums", after_long_help = AFTER_HELP)]
pub struct Args {
    /// Form: delta or 11a
    #[arg(long)]
    pub form: Option<String>,
    /// Suite: forms-check, special-check, quad-appendix, bessel-asymptotics,
    /// delta-identity, voronoi, poisson-step, decomposition, bound-ledger,
    /// sumscan, lvalue, weylscan, all
    #[arg(long)]
    pub suite: Option<String>,
    /// key=value file with the same keys as these flags
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Coefficient cache directory (default: $BDLAB_CACHE)
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Worker threads (default 1)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Pass threshold for the suite's main identity
    #[arg(long)]
    pub tol: Option<f64>,
    /// Exponent stand-in for N^eps factors
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Largest coefficient table the run may build
    #[arg(long = "n-max")]
    pub n_max: Option<usize>,
    /// Sum length N, or the suite's scale parameter (see below)
    #[arg(long)]
    pub n: Option<f64>,
    /// Phase size T
    #[arg(long)]
    pub t: Option<f64>,
    /// Delta-method parameter K
    #[arg(long)]
    pub k: Option<f64>,
    /// Prime modulus or the size P of the prime set
    #[arg(long)]
    pub p: Option<f64>,
    /// Comma-separated increasing t values
    #[arg(long = "t-grid")]
    pub t_grid: Option<String>,
    /// CSV column reference for every suite
    #[arg(long = "csv-columns")]
    pub csv_columns: bool,
}

impl Args {
    /// Resolves against the environment, the config file and defaults.
    pub fn resolve(&self, cache_env: Option<String>) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::new(SuiteSelection::None);
        if let Some(dir) = cache_env.filter(|d| !d.is_empty()) {
            cfg.cache = Some(PathBuf::from(dir));
        }
        if let Some(path) = &self.config {
            cfg.apply_file(path)?;
        }
        let flags: [(&str, Option<String>); 13] = [
            ("form", self.form.clone()),
            ("suite", self.suite.clone()),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("cache", self.cache.as_ref().map(|p| p.display().to_string())),
            ("threads", self.threads.map(|x| x.to_string())),
            ("tol", self.tol.map(|x| x.to_string())),
            ("epsilon", self.epsilon.map(|x| x.to_string())),
            ("n_max", self.n_max.map(|x| x.to_string())),
            ("n", self.n.map(|x| x.to_string())),
            ("t", self.t.map(|x| x.to_string())),
            ("k", self.k.map(|x| x.to_string())),
            ("p", self.p.map(|x| x.to_string())),
            ("t_grid", self.t_grid.clone()),
        ];
        for (k, v) in flags {
            if let Some(v) = v {
                cfg.set(k, &v)?;
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolved_round_trips() {
        let mut c = RunConfig::new(SuiteSelection::One(Suite::Lvalue));
        c.set("t_grid", "16, 32,64").unwrap();
        c.set("tol", "1e-7").unwrap();
        c.set("form", "11a").unwrap();
        let mut d = RunConfig::new(SuiteSelection::None);
        for (k, v) in c.resolved() {
            d.set(k, &v).unwrap();
        }
        assert_eq!(c, d);
    }

    #[test]
    fn bad_values_rejected() {
        let mut c = RunConfig::new(SuiteSelection::None);
        assert!(c.set("bogus", "1").is_err());
        assert!(c.set("threads", "0").is_err());
        assert!(c.set("t_grid", "32,16").is_err());
        assert!(c.set("suite", "everything").is_err());
        assert!(c.set("n", "-3").is_err());
    }
}
