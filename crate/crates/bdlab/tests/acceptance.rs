//! Acceptance criteria 1-13. Each prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails. Built without the libtest harness
//! so the lines always reach the output.

use std::time::Instant;

use bdlab::cli::suites::{run_suite, Check, Context, SuiteReport};
use bdlab::cli::{cache_read, cache_write, run, RunConfig, Suite, SuiteSelection};
use bdlab::forms::{coefficients_delta, FormLabel};
use serde_json::Value;

struct Verdicts(Vec<(u32, bool, String)>);

impl Verdicts {
    fn record(&mut self, n: u32, pass: bool, detail: String) {
        println!("CRITERION {n:>2}: {} {detail}", if pass { "PASS" } else { "FAIL" });
        self.0.push((n, pass, detail));
    }
}

fn get<'a>(rep: &'a SuiteReport, name: &str) -> &'a Check {
    rep.checks.iter().find(|c| c.name == name).unwrap_or_else(|| panic!("{}: no check {name}; got {:?}", rep.suite, rep.checks))
}

fn all_pass(rep: &SuiteReport, prefix: &str) -> (bool, Vec<String>) {
    let hits: Vec<&Check> = rep.checks.iter().filter(|c| c.name.starts_with(prefix)).collect();
    assert!(!hits.is_empty(), "{}: no checks named {prefix}*", rep.suite);
    (hits.iter().all(|c| c.pass), hits.iter().map(|c| format!("{}: {}", c.name, c.summary)).collect())
}

fn timed(ctx: &Context, suite: Suite) -> (SuiteReport, f64) {
    let start = Instant::now();
    let rep = run_suite(ctx, suite).unwrap_or_else(|e| panic!("{suite}: {e}"));
    (rep, start.elapsed().as_secs_f64())
}

fn config(form: FormLabel) -> RunConfig {
    let mut c = RunConfig::new(SuiteSelection::All);
    c.form = form;
    c
}

/// Numeric leaves of two JSON trees agree to `tol` relative; everything
/// else is identical.
fn close(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Number(x), Value::Number(y)) => {
            let (x, y) = (x.as_f64().unwrap(), y.as_f64().unwrap());
            x == y || (x - y).abs() <= tol * x.abs().max(y.abs())
        }
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| close(p, q, tol)),
        (Value::Object(x), Value::Object(y)) => x.len() == y.len() && x.iter().all(|(k, v)| y.get(k).is_some_and(|w| close(v, w, tol))),
        _ => a == b,
    }
}

fn main() {
    let mut v = Verdicts(vec![]);
    let (cfg_d, cfg_11) = (config(FormLabel::Delta), config(FormLabel::Level11));
    let (delta, level11) = (Context::new(&cfg_d), Context::new(&cfg_11));

    // 1 and 2: Voronoi for both forms, with eta calibration at two moduli
    let (vd, td) = timed(&delta, Suite::Voronoi);
    let (v11, t11) = timed(&level11, Suite::Voronoi);
    let (pd, sd) = all_pass(&vd, "identity-");
    let (p11, s11) = all_pass(&v11, "identity-");
    let cases = (sd.len() + s11.len()) as f64;
    v.record(1, pd && p11 && (td + t11) / cases <= 30.0, format!("{} | {} | {:.1} s per case", sd.join("; "), s11.join("; "), (td + t11) / cases));
    let (cd, c11) = (get(&vd, "eta-calibration"), get(&v11, "eta-calibration"));
    v.record(2, cd.pass && c11.pass, format!("delta {} | 11a {}", cd.summary, c11.summary));

    // 3, 4, 5: Bessel integral asymptotics, decay, Weber
    let (b, tb) = timed(&delta, Suite::BesselAsymptotics);
    let (p3, s3) = all_pass(&b, "diagonal-");
    v.record(3, p3 && tb <= 120.0, format!("{} ({tb:.1} s for the suite)", s3.join("; ")));
    let c4 = get(&b, "offdiagonal-decay");
    let n4 = c4.values.as_array().map_or(0, |a| a.len());
    v.record(4, c4.pass && n4 >= 20, c4.summary.clone());
    let c5 = get(&b, "weber-identity");
    v.record(5, c5.pass, c5.summary.clone());

    // 6: delta identity on a 50 x 50 grid
    let (d6, t6) = timed(&delta, Suite::DeltaIdentity);
    let c6 = get(&d6, "delta-grid");
    v.record(6, c6.pass && t6 <= 300.0, format!("{} ({t6:.1} s)", c6.summary));

    // 7: decomposition at the stated parameters
    let (d7, t7) = timed(&delta, Suite::Decomposition);
    let (c7, c7b) = (get(&d7, "stated-parameters"), get(&d7, "within-hypotheses"));
    v.record(7, c7.pass && t7 <= 900.0, format!("{} | {} ({t7:.1} s)", c7.summary, c7b.summary));

    // 8: Poisson step on five configurations
    let (p8, _) = timed(&delta, Suite::PoissonStep);
    let (ok8, s8) = all_pass(&p8, "configuration-");
    v.record(8, ok8 && s8.len() == 5, s8.join("; "));

    // 9 and 10: integral bounds, theorem ledger, Wilton scan
    let (l, _) = timed(&delta, Suite::BoundLedger);
    let lc = ["j-integral-bound", "k-integral-bound", "l-integral-bound"].map(|n| get(&l, n));
    v.record(
        9,
        lc.iter().all(|c| c.pass),
        lc.iter().map(|c| c.summary.clone()).collect::<Vec<_>>().join("; "),
    );
    let (w, _) = timed(&delta, Suite::Sumscan);
    let (c10, cw) = (get(&l, "theorem-ratio"), get(&w, "wilton"));
    let grid_ok = c10.values["rows"].as_array().map_or(0, |r| r.len()) == 6;
    v.record(10, c10.pass && cw.pass && grid_ok, format!("{} | {}", c10.summary, cw.summary));

    // 11: stationary-phase lemmas
    let (q, _) = timed(&delta, Suite::QuadAppendix);
    let (ok11, s11) = all_pass(&q, "");
    v.record(11, ok11, s11.join("; "));

    // 12: AFE self-consistency for both forms and the Weyl scan
    let (ld, tld) = timed(&delta, Suite::Lvalue);
    let (l11, tl11) = timed(&level11, Suite::Lvalue);
    let (wy, twy) = timed(&delta, Suite::Weylscan);
    let names = ["cutoff-agreement", "conjugation-symmetry"];
    let ok12 = names.iter().all(|n| get(&ld, n).pass && get(&l11, n).pass) && get(&wy, "growth-exponent").pass;
    let t12 = tld + tl11 + twy;
    v.record(
        12,
        ok12 && t12 <= 600.0,
        format!(
            "delta: {}; {} | 11a: {}; {} | {} ({t12:.1} s)",
            get(&ld, names[0]).summary,
            get(&ld, names[1]).summary,
            get(&l11, names[0]).summary,
            get(&l11, names[1]).summary,
            get(&wy, "growth-exponent").summary
        ),
    );

    // 13: cache round trip and determinism across thread counts
    let dir = tempfile::tempdir().unwrap();
    let table = coefficients_delta(10_000).unwrap();
    cache_write(&table, &dir.path().join("delta.bdlab")).unwrap();
    let bitwise = cache_read(&dir.path().join("delta.bdlab")).unwrap() == table;
    let runs: Vec<Value> = [(1, "a"), (2, "b"), (1, "c")]
        .iter()
        .map(|&(threads, sub)| {
            let mut c = RunConfig::new(SuiteSelection::One(Suite::DeltaIdentity));
            c.threads = threads;
            c.out = dir.path().join(sub);
            run(&c).unwrap();
            let text = std::fs::read_to_string(c.out.join("results.json")).unwrap();
            serde_json::from_str::<Value>(&text).unwrap()["suites"].clone()
        })
        .collect();
    let same_threads = runs[0] == runs[2];
    let across = close(&runs[0], &runs[1], 1e-12);
    v.record(13, bitwise && same_threads && across, format!("cache round trip bitwise {bitwise}; same threads identical {same_threads}; 1 vs 2 threads within 1e-12 {across}"));

    let failed: Vec<u32> = v.0.iter().filter(|x| !x.1).map(|x| x.0).collect();
    if failed.is_empty() {
        println!("acceptance: all 13 criteria passed");
    } else {
        eprintln!("acceptance: criteria failed: {failed:?}");
        std::process::exit(1);
    }
}
