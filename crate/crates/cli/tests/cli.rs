use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thetazeta"))
        .current_dir(dir)
        .env_remove("THETAZETA_CACHE")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Data rows of a CSV output: `#` header and column line removed.
fn rows(o: &Output) -> Vec<Vec<String>> {
    let text = stdout(o);
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn columns(o: &Output) -> Vec<String> {
    let text = stdout(o);
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    r.headers().unwrap().iter().map(String::from).collect()
}

#[test]
fn primes_summary_and_cache_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let first = run(dir.path(), &["primes", "--limit", "1000"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout(&first), "limit=1000 pi=168\n");
    let cache = dir.path().join(".thetazeta/primes.cache");
    let before = std::fs::read(&cache).unwrap();
    let modified = std::fs::metadata(&cache).unwrap().modified().unwrap();
    let again = run(dir.path(), &["primes", "--limit", "1000"]);
    assert_eq!(stdout(&again), stdout(&first));
    assert_eq!(std::fs::read(&cache).unwrap(), before);
    assert_eq!(std::fs::metadata(&cache).unwrap().modified().unwrap(), modified);
    // a smaller limit is answered from the existing checkpoints
    assert_eq!(stdout(&run(dir.path(), &["primes", "--limit", "100"])), "limit=100 pi=25\n");
    assert_eq!(std::fs::read(&cache).unwrap(), before);
}

#[test]
fn primes_usage_and_resource_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(dir.path(), &["primes", "--limit", "1"]).status.code(), Some(2));
    let bad = dir.path().join("bad.cache");
    std::fs::write(&bad, "not a cache\n").unwrap();
    let o = run(dir.path(), &["--cache", bad.to_str().unwrap(), "primes", "--limit", "10"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("elsewhere/p.cache");
    let o = Command::new(env!("CARGO_BIN_EXE_thetazeta"))
        .current_dir(dir.path())
        .env("THETAZETA_CACHE", &target)
        .args(["primes", "--limit", "500"])
        .output()
        .unwrap();
    assert_eq!(stdout(&o), "limit=500 pi=95\n");
    assert!(target.exists());
    assert!(!dir.path().join(".thetazeta").exists());
}

#[test]
fn identities_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["identities", "--eq", "5", "--z", "2", "--tol", "1e-5", "--prime-limit", "1000000"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert_eq!(rows(&ok).len(), 1);
    let pole = run(dir.path(), &["identities", "--eq", "6", "--z", "1", "--prime-limit", "100000"]);
    assert_eq!(pole.status.code(), Some(2));
    let tight = run(dir.path(), &["identities", "--eq", "5", "--z", "1.5", "--tol", "1e-300", "--prime-limit", "100000"]);
    assert_eq!(tight.status.code(), Some(1));
}

#[test]
fn identities_eq7_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eq7.csv");
    let o = run(
        dir.path(),
        &["--out", out.to_str().unwrap(), "identities", "--eq", "7", "--grid", "default", "--tol", "1e-4", "--prime-limit", "1000000"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut r = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    assert_eq!(r.records().count(), 3);
}

#[test]
fn scan_grid_contract_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["scan", "--eps", "0.1", "--b", "0:10:0.5", "--N", "24", "--prime-limit", "100000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&o).len(), 21);
    let cols = columns(&o);
    for c in ["b", "epsilon", "N_used", "radius_estimate", "method", "noise_floor_order", "T", "prime_limit", "digits", "inside_3pi", "inside_4pi"] {
        assert!(cols.iter().any(|x| x == c), "missing column {c}");
    }
    let inside = cols.iter().position(|c| c == "inside_3pi").unwrap();
    let r = rows(&o);
    assert_eq!(r[18][inside], "true"); // b = 9
    assert_eq!(r[19][inside], "false"); // b = 9.5
}

#[test]
fn scan_is_symmetric_and_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["scan", "--b", "-5:5:1", "--N", "16", "--prime-limit", "100000"];
    let a = run(dir.path(), &args);
    let b = run(dir.path(), &args);
    assert_eq!(a.stdout, b.stdout);
    let cols = columns(&a);
    let k = cols.iter().position(|c| c == "radius_estimate").unwrap();
    let r = rows(&a);
    assert_eq!(r.len(), 11);
    for i in 0..5 {
        assert_eq!(r[i][k], r[10 - i][k]);
    }
}

#[test]
fn scan_calibration_gate() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(dir.path(), &["scan", "--calibrate", "--b", "0:1:1", "--N", "16", "--prime-limit", "100000"]);
    assert_eq!(ok.status.code(), Some(0));
    // the minimum-root proxy overshoots the pole distance by about 10% at order 20
    let refused = run(dir.path(), &["scan", "--calibrate", "--method", "max_tail_root", "--b", "0:1:1", "--prime-limit", "100000"]);
    assert_eq!(refused.status.code(), Some(1));
    assert!(refused.stdout.is_empty());
}

#[test]
fn json_mirrors_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv_out = run(dir.path(), &["scan", "--b", "0:2:1", "--N", "16", "--prime-limit", "100000"]);
    let json_out = run(dir.path(), &["--format", "json", "scan", "--b", "0:2:1", "--N", "16", "--prime-limit", "100000"]);
    let v: serde_json::Value = serde_json::from_slice(&json_out.stdout).unwrap();
    let arr = v.as_array().unwrap();
    assert_eq!(arr.len(), 3);
    let keys: Vec<String> = arr[0].as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys, columns(&csv_out));
}

#[test]
fn zeros_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["zeros", "--max-im", "60"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 10);
    let first: f64 = r[0][1].parse().unwrap();
    assert!((first - 14.134725).abs() < 1e-6);
    assert_eq!(r[0][3], "false");
    assert_eq!(r[5][3], "true");
    let sixth: f64 = r[5][1].parse().unwrap();
    assert!((sixth - 37.586).abs() < 1e-3);
}

#[test]
fn counterexample_modes() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["counterexample"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    let worst = r.iter().filter(|x| x[0] == "transform").map(|x| x[7].parse::<f64>().unwrap()).fold(0.0, f64::max);
    assert!(worst < 1e-8);
    assert_eq!(r.iter().filter(|x| x[0] == "transform").count(), 16);
    assert_eq!(run(dir.path(), &["counterexample", "--gamma", "0.3"]).status.code(), Some(2));
    let near = run(dir.path(), &["counterexample", "--near-pole"]);
    assert_eq!(near.status.code(), Some(0));
    assert!(rows(&near).iter().any(|x| x[0] == "near_pole" && x[9].starts_with("pole")));
}

#[test]
fn theta_direct_evaluation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["--digits", "15", "theta", "--z", "2,0", "--order", "1", "--prime-limit", "100000"]);
    assert_eq!(o.status.code(), Some(0));
    let r = rows(&o);
    assert_eq!(r.len(), 2);
    let im: f64 = r[0][4].parse().unwrap();
    assert_eq!(im, 0.0);
    assert_eq!(run(dir.path(), &["theta", "--z", "0.5,1", "--prime-limit", "1000"]).status.code(), Some(2));
    assert_eq!(run(dir.path(), &["--digits", "40", "theta", "--z", "2"]).status.code(), Some(2));
}
