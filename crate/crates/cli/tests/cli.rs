use std::process::{Command, Output};

use serde_json::Value;

fn ffstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffstat")).args(args).env_remove("FFSTAT_CACHE_DIR").output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&ffstat(&a))).unwrap()
}

#[test]
fn lfunc_of_x2_plus_1() {
    let v = json(&["lfunc", "--q", "3", "--modulus", "X^2+1", "--check-rh"]);
    assert_eq!(v["delta"], 0);
    assert_eq!(v["lstar_coeffs"], serde_json::json!([1]));
    assert!(v["rh_max_deviation"].as_f64().unwrap() < 1e-9);
    // the comma format gives the same character
    let w = json(&["lfunc", "--q", "3", "--modulus", "1,0,1", "--check-rh"]);
    assert_eq!(v, w);
}

#[test]
fn genus_zero_family_and_moments() {
    let v = json(&["family", "--q", "3", "--genus", "0", "--variant", "monic", "--count"]);
    assert_eq!(v["count"], 24);
    let rows = json(&["moments", "--q", "3", "--genus", "0", "--n-max", "3"]);
    for row in rows.as_array().unwrap() {
        assert_eq!(row["avg_T_num"], "0");
    }
}

#[test]
fn worked_curve_json() {
    let v = json(&["curve", "--q", "3", "--f1", "X^2+1", "--f2", "X^2+X+2", "--f3", "1", "--n-max", "6"]);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["N"][0], 4);
    assert_eq!(v["T"][1], -6);
    assert_eq!(v["P_C"], serde_json::json!([1, 0, 3]));
}

#[test]
fn moments_csv_header_is_stable() {
    let text = stdout(&ffstat(&["moments", "--q", "3", "--genus", "1", "--n-max", "2"]));
    let header = text.lines().next().unwrap();
    assert!(header.starts_with(
        "q,g,n,family_size,avg_T_num,avg_T_den,avg_trace,reference,gap,roots_term,bilinear_term,roots_bound,nongen_bound"
    ));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn eulersum_reference_at_degree_one() {
    let v = json(&["eulersum", "--q", "3", "--n", "1", "--M", "4", "--kind", "plus"]);
    assert_eq!(v[0]["reference_num"], "2");
    assert_eq!(v[0]["reference_den"], "1");
}

#[test]
fn config_errors_exit_one_with_one_line() {
    for args in [
        &["lfunc", "--q", "3", "--modulus", "1,0,3"][..],
        &["lfunc", "--q", "4", "--modulus", "X"][..],
        &["moments", "--genus", "2", "--n-max", "0"][..],
        &["moments", "--genus", "3", "--n-max", "8", "--work-budget", "10"][..],
        &["density", "--genus", "0", "--alpha", "0.5"][..],
        &["lemma61", "--prime", "X^2+2X+1"][..],
        &["family", "--genus", "nope"][..],
    ] {
        let out = ffstat(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.contains("--"), "{args:?}: diagnostic should name the flag: {err}");
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.csv");
    let args = ["moments", "--genus", "1", "--n-max", "4"];
    let direct = stdout(&ffstat(&args));
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    assert!(stdout(&ffstat(&with_out)).is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), direct);
}

#[test]
fn cache_reload_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let fresh = stdout(&ffstat(&["primes", "--q", "3", "--degree", "6"]));
    let first = stdout(&ffstat(&["primes", "--q", "3", "--degree", "6", "--cache-dir", d]));
    let second = stdout(&ffstat(&["primes", "--q", "3", "--degree", "6", "--cache-dir", d]));
    assert_eq!(fresh, first);
    assert_eq!(first, second);

    let fam_fresh = stdout(&ffstat(&["family", "--q", "3", "--genus", "2"]));
    let fam_first = stdout(&ffstat(&["family", "--q", "3", "--genus", "2", "--cache-dir", d]));
    let fam_cached = stdout(&ffstat(&["family", "--q", "3", "--genus", "2", "--cache-dir", d]));
    assert_eq!(fam_fresh, fam_first);
    assert_eq!(fam_first, fam_cached);

    let file = dir.path().join("primes-q3-6.jsonl");
    let text = std::fs::read_to_string(&file).unwrap();
    let tampered = text.replacen("[[0,1]]", "[[1,1]]", 1);
    assert_ne!(text, tampered);
    std::fs::write(&file, tampered).unwrap();
    let out = ffstat(&["primes", "--q", "3", "--degree", "6", "--cache-dir", d]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rebuilding"));
    assert_eq!(stdout(&out), fresh);
    assert_eq!(std::fs::read_to_string(&file).unwrap(), text);
}

#[test]
fn cache_flag_wins_over_environment() {
    let flag_dir = tempfile::tempdir().unwrap();
    let env_dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_ffstat"))
        .args(["primes", "--degree", "2", "--cache-dir", flag_dir.path().to_str().unwrap()])
        .env("FFSTAT_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(flag_dir.path().join("primes-q3-2.jsonl").exists());
    assert!(!env_dir.path().join("primes-q3-2.jsonl").exists());

    let out = Command::new(env!("CARGO_BIN_EXE_ffstat"))
        .args(["primes", "--degree", "2"])
        .env("FFSTAT_CACHE_DIR", env_dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(env_dir.path().join("primes-q3-2.jsonl").exists());
}

#[test]
fn density_alpha_above_one_warns() {
    let out = ffstat(&["density", "--genus", "1", "--alpha", "1.5", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["alpha_warning"], true);
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
}
