use std::fs;

use bdlab::cli::cache::{decode, encode};
use bdlab::cli::{cache_read, cache_write, main_with_args, run, CacheError, CliError, RunConfig, Suite, SuiteSelection};
use bdlab::forms::coefficients_delta;

fn config(suite: Suite, out: &std::path::Path) -> RunConfig {
    let mut c = RunConfig::new(SuiteSelection::One(suite));
    c.out = out.to_path_buf();
    c
}

#[test]
fn cache_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("delta.bdlab");
    let t = coefficients_delta(10_000).unwrap();
    cache_write(&t, &path).unwrap();
    let back = cache_read(&path).unwrap();
    assert_eq!(back, t);
    assert!(back.values().iter().zip(t.values()).all(|(a, b)| a.to_bits() == b.to_bits()));
}

#[test]
fn corrupted_byte_is_a_checksum_error() {
    let mut bytes = encode(&coefficients_delta(500).unwrap());
    let i = bytes.len() - 100;
    bytes[i] ^= 0x10;
    assert!(matches!(decode(&bytes, "t"), Err(CacheError::Checksum { .. })));
}

#[test]
fn version_bump_names_both_versions() {
    let mut bytes = encode(&coefficients_delta(50).unwrap());
    bytes[5] = b'2';
    let err = decode(&bytes, "t").unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, CacheError::Version { .. }));
    assert!(msg.contains("version 2") && msg.contains("version 1"), "{msg}");
}

#[test]
fn truncation_and_garbage_are_rejected() {
    let bytes = encode(&coefficients_delta(50).unwrap());
    assert!(matches!(decode(&bytes[..bytes.len() - 3], "t"), Err(CacheError::Truncated { .. })));
    let mut long = bytes.clone();
    long.push(0);
    assert!(matches!(decode(&long, "t"), Err(CacheError::Trailing { extra: 1, .. })));
    assert!(matches!(decode(b"hello\nworld", "t"), Err(CacheError::NotACache { .. })));
    let bad_header = String::from_utf8_lossy(&bytes).replacen("encoding=i128", "encoding=u8", 1);
    assert!(matches!(decode(bad_header.as_bytes(), "t"), Err(CacheError::Header { .. })));
}

#[test]
fn no_suite_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = RunConfig::new(SuiteSelection::None);
    c.out = dir.path().to_path_buf();
    let err = run(&c).unwrap_err();
    assert_eq!(err.exit_code(), 2);
    assert_eq!(err.to_string(), "no suite selected");
    assert_eq!(main_with_args(["bdlab", "--suite", "none"]), 2);
}

#[test]
fn weylscan_beyond_table_limit_names_required_size() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = config(Suite::Weylscan, dir.path());
    c.set("t_grid", "16,1e5").unwrap();
    let err = run(&c).unwrap_err();
    let msg = err.to_string();
    assert_eq!(err.exit_code(), 2);
    assert!(msg.contains("n_max >= ") && msg.contains("configured n_max is 300000"), "{msg}");
    // nothing was written
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none());
}

#[test]
fn config_file_keys_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.cfg");
    fs::write(&file, "suite = special-check\n# comment\nwobble = 3\n").unwrap();
    let code = main_with_args(["bdlab", "--config", file.to_str().unwrap()]);
    assert_eq!(code, 2);
    fs::write(&file, "suite = special-check\nthreads = 2\nout = ".to_string() + dir.path().join("o").to_str().unwrap() + "\n").unwrap();
    assert_eq!(main_with_args(["bdlab", "--config", file.to_str().unwrap()]), 0);
    let resolved = fs::read_to_string(dir.path().join("o/config.resolved")).unwrap();
    assert!(resolved.contains("threads = 2") && resolved.contains("suite = special-check"), "{resolved}");
}

#[test]
fn flags_override_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("run.cfg");
    fs::write(&file, "suite = lvalue\nform = 11a\nthreads = 3\n").unwrap();
    let args = bdlab::cli::Args {
        form: None,
        suite: Some("sumscan".into()),
        config: Some(file),
        out: None,
        cache: None,
        threads: None,
        tol: None,
        epsilon: None,
        n_max: None,
        n: None,
        t: None,
        k: None,
        p: None,
        t_grid: None,
        csv_columns: false,
    };
    let c = args.resolve(Some("/tmp/env-cache".into())).unwrap();
    assert_eq!(c.suite, SuiteSelection::One(Suite::Sumscan));
    assert_eq!(c.form.to_string(), "11a");
    assert_eq!(c.threads, 3);
    assert_eq!(c.cache.unwrap().to_str(), Some("/tmp/env-cache"));
}

#[test]
fn held_lock_blocks_a_second_run() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join(".bdlab.lock"), "1").unwrap();
    let err = run(&config(Suite::SpecialCheck, dir.path())).unwrap_err();
    assert!(matches!(err, CliError::Locked { .. }));
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn results_are_byte_stable() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run(&config(Suite::QuadAppendix, a.path())).unwrap();
    let rb = run(&config(Suite::QuadAppendix, b.path())).unwrap();
    assert_eq!(ra.exit_code(), 0);
    let ja = fs::read_to_string(a.path().join("results.json")).unwrap();
    let jb = fs::read_to_string(b.path().join("results.json")).unwrap();
    // only the output path differs
    let strip = |s: &str| s.lines().filter(|l| !l.trim_start().starts_with("\"out\"")).collect::<Vec<_>>().join("\n");
    assert_eq!(strip(&ja), strip(&jb));
    assert!(ja.contains("\"schema_version\": 1"));
    assert!(ja.contains("\"window\""), "fits carry their windows");
    let csv = fs::read_to_string(a.path().join("quad-appendix.second_derivative.csv")).unwrap();
    assert!(csv.starts_with("lambda,beta,integral,bound\n"));
    assert!(rb.results.pass);
    assert!(!a.path().join(".bdlab.lock").exists());
}

#[test]
fn cache_directory_is_used_and_reused() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let mut c = config(Suite::FormsCheck, &dir.path().join("o"));
    c.cache = Some(cache.clone());
    assert_eq!(run(&c).unwrap().exit_code(), 0);
    let t = cache_read(&cache.join("delta.bdlab")).unwrap();
    assert_eq!(t.n_max(), 10_000);
    // a corrupted cache is reported, not silently rebuilt
    let mut bytes = fs::read(cache.join("delta.bdlab")).unwrap();
    let n = bytes.len();
    bytes[n - 20] ^= 1;
    fs::write(cache.join("delta.bdlab"), bytes).unwrap();
    let err = run(&c).unwrap_err();
    assert!(err.to_string().contains("checksum mismatch"), "{err}");
    assert_eq!(err.exit_code(), 2);
}
