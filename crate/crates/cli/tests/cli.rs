use std::fs;
use std::process::{Command, Output};

use entcap_core::{asymptotic_capacity, capacity, EnsembleKind, EnsembleSpec};
use serde_json::Value;

fn entcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcap")).args(args).output().expect("binary runs")
}

fn entcap_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_entcap")).args(args).env(key, value).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn exact_smallest_hilbert_schmidt() {
    let o = entcap(&["exact", "--ensemble", "hs", "-m", "2", "-n", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("0.328986813369645"), "{}", stdout(&o));
}

#[test]
fn exact_single_level_is_all_zero() {
    let o = entcap(&["exact", "--ensemble", "hs", "-m", "1", "-n", "7", "--csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row, "exact,hs,1,7,0,0,0,0,0,0.1.0");
}

#[test]
fn exact_json_echoes_spec() {
    let o = entcap(&["exact", "--ensemble", "bh", "-m", "3", "-n", "5", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["command"], "exact");
    assert_eq!(v["spec"]["m"], 3);
    assert_eq!(v["spec"]["n"], 5);
    assert_eq!(v["spec"]["kind"], "bures-hall");
    assert!(v["tool_version"].is_string() && v["timestamp"].is_string());
    // agrees with direct simplex quadrature to 1e-14
    let golden = 0.410_056_758_210_783_9;
    assert!((v["mean_capacity"].as_f64().unwrap() - golden).abs() < 1e-13);
    for key in ["mean_s1", "var_s1", "mean_s2", "annealed_capacity"] {
        assert!(v[key].is_f64(), "{key}");
    }
}

#[test]
fn exact_ranges() {
    let o = entcap(&["exact", "-m", "2..50", "--offset", "5", "--csv"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 50);
    let o = entcap(&["exact", "-m", "2..4", "-n", "4", "--json"]);
    assert_eq!(json(&o).as_array().unwrap().len(), 3);
}

#[test]
fn invalid_dimensions_exit_two() {
    let o = entcap(&["exact", "-m", "5", "-n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n must be >= m"));
    let o = entcap(&["exact", "-m", "0", "-n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m must be >= 1"));
    let o = entcap(&["simulate", "-m", "4", "-n", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn limits() {
    assert_eq!(stdout(&entcap(&["limit", "hs"])).trim(), "0.539868133696453");
    assert_eq!(stdout(&entcap(&["limit", "bh"])).trim(), "0.644934066848226");
    let o = entcap(&["limit", "hs", "--delta", "-m", "100", "-n", "100"]);
    let gap: f64 = stdout(&o).trim().parse().unwrap();
    let spec = EnsembleSpec::hilbert_schmidt(100, 100).unwrap();
    let expected = capacity(spec).unwrap() - asymptotic_capacity(EnsembleKind::HilbertSchmidt);
    assert!((gap - expected).abs() < 1e-15);
    assert!(gap < 0.0 && gap.abs() < 1e-3);
}

fn estimate_of(o: &Output) -> (f64, f64) {
    let v = json(o);
    (v["estimate"]["mean"].as_f64().unwrap(), v["estimate"]["std_error"].as_f64().unwrap())
}

#[test]
fn simulate_hilbert_schmidt() {
    let o = entcap(&["simulate", "--ensemble", "hs", "-m", "4", "-n", "4", "--samples", "100000", "--seed", "7", "--json"]);
    assert!(o.status.success());
    let (mean, se) = estimate_of(&o);
    let exact = capacity(EnsembleSpec::hilbert_schmidt(4, 4).unwrap()).unwrap();
    assert!((mean - exact).abs() <= 4.0 * se, "{mean} ± {se} vs {exact}");
    assert_eq!(json(&o)["seed"], 7);
}

#[test]
fn simulate_bures_hall() {
    let o = entcap(&["simulate", "--ensemble", "bh", "-m", "2", "-n", "3", "--samples", "100000", "--json"]);
    assert!(o.status.success());
    let (mean, se) = estimate_of(&o);
    let exact = capacity(EnsembleSpec::bures_hall(2, 3).unwrap()).unwrap();
    assert!((mean - exact).abs() <= 4.0 * se, "{mean} ± {se} vs {exact}");
    assert_eq!(json(&o)["settings"]["sampler"], "mcmc");
}

#[test]
fn simulate_single_level() {
    let o = entcap(&["simulate", "--ensemble", "hs", "-m", "1", "-n", "3", "--samples", "1000", "--observable", "S1,S2,C,VarS1", "--json"]);
    assert!(o.status.success());
    for rec in json(&o).as_array().unwrap() {
        assert_eq!(rec["estimate"]["mean"].as_f64(), Some(0.0));
        assert_eq!(rec["estimate"]["std_error"].as_f64(), Some(0.0));
    }
}

#[test]
fn simulate_csv_is_reproducible_across_thread_counts() {
    let args = ["simulate", "-e", "bh", "-m", "3", "-n", "4", "--samples", "4000", "--burn-in", "500", "--seed", "11", "--csv"];
    let a = entcap_env(&args, "ENTCAP_THREADS", "1");
    let b = entcap_env(&args, "ENTCAP_THREADS", "3");
    let c = entcap(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let other = entcap(&["simulate", "-e", "bh", "-m", "3", "-n", "4", "--samples", "4000", "--burn-in", "500", "--seed", "12", "--csv"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn unconverged_chains_exit_three_but_still_report() {
    let o = entcap(&[
        "simulate", "-e", "bh", "-m", "4", "-n", "4", "--samples", "400", "--burn-in", "0", "--step-scale", "0.001", "--csv",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("split-R^"));
}

#[test]
fn simulate_rejects_matrix_sampler_for_bures_hall() {
    let o = entcap(&["simulate", "-e", "bh", "-m", "2", "-n", "3", "--sampler", "matrix"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Hilbert-Schmidt"));
}

#[test]
fn bad_thread_setting_is_rejected() {
    let o = entcap_env(&["limit", "hs"], "ENTCAP_THREADS", "0");
    assert!(!o.status.success());
}

fn read_rows(path: &std::path::Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

#[test]
fn figure1_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = entcap(&["figure1", "--out", out]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let hs_path = dir.path().join("hs.csv");
    let bh_path = dir.path().join("bh.csv");
    let header = fs::read_to_string(&hs_path).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "m,n,alpha_or_beta_offset,exact_capacity,limit,mc_mean,mc_stderr,samples,seed");
    assert!(!fs::read(&hs_path).unwrap().contains(&b'\r'));
    let hs = read_rows(&hs_path);
    let bh = read_rows(&bh_path);
    assert_eq!(hs.len(), 3 * 49);
    let f = |s: &str| s.parse::<f64>().unwrap();
    let hs50 = hs.iter().find(|r| r[0] == "50" && r[1] == "50").unwrap();
    assert!((f(&hs50[3]) - 0.539868).abs() < 2e-3);
    assert!(hs50[5].is_empty() && hs50[8].is_empty());
    let bh_square: Vec<f64> = bh.iter().filter(|r| r[0] == r[1]).map(|r| f(&r[3])).collect();
    assert!(bh_square.windows(2).all(|w| w[1] > w[0] && w[1] < 0.644934066848226));
    for (h, b) in hs.iter().zip(&bh) {
        assert_eq!((&h[0], &h[1]), (&b[0], &b[1]));
        if h[0] == "2" && h[1] == "2" {
            // the single exception at the smallest square size
            assert!(f(&b[3]) < f(&h[3]));
        } else {
            assert!(f(&b[3]) > f(&h[3]), "m={} n={}", h[0], h[1]);
        }
    }
    assert_eq!(bh[0][2], "-0.5");
    assert_eq!(hs.iter().find(|r| r[0] == "2" && r[1] == "7").unwrap()[2], "5");
}

#[test]
fn figure1_with_mc_is_byte_identical_for_a_seed() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let o = entcap(&["figure1", "--out", dir.path().to_str().unwrap(), "--with-mc", "--m-max", "3", "--samples", "2000", "--seed", "5"]);
        assert!(o.status.success());
        (fs::read(dir.path().join("hs.csv")).unwrap(), fs::read(dir.path().join("bh.csv")).unwrap())
    };
    let a = run();
    assert_eq!(a, run());
    let text = String::from_utf8(a.1).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row.len(), 9);
    assert_eq!((row[7], row[8]), ("2000", "5"));
    assert!(row[5].parse::<f64>().is_ok() && row[6].parse::<f64>().is_ok());
}

#[test]
fn figure1_failure_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = entcap(&["figure1", "--out", dir.path().to_str().unwrap(), "--m-max", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn verify_suites() {
    for (suite, count) in [("identities", 2125), ("pipeline", 45), ("oracle", 16)] {
        let o = entcap(&["verify", "--suite", suite]);
        assert!(o.status.success(), "{suite}");
        let v = json(&o);
        assert_eq!(v["passed"], true);
        assert_eq!(v["total"], count);
        let first = &v["checks"][0];
        for key in ["name", "params", "residual", "tolerance", "pass"] {
            assert!(!first[key].is_null(), "{suite}: {key}");
        }
    }
}
