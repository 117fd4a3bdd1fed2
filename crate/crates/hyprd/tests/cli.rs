use std::fs;
use std::process::{Command, Output};

fn hyprd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyprd"))
        .args(args)
        .env_remove("HYPRD_K")
        .env_remove("HYPRD_SEED")
        .output()
        .expect("spawn hyprd")
}

fn stdout(args: &[&str]) -> String {
    let out = hyprd(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn spherical_table_layout() {
    let text = stdout(&["spherical", "--n-max", "10"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,s,phi,envelope,ratio");
    assert_eq!(lines.len(), 1 + 55 + 1);
    let trailer = lines.last().unwrap();
    assert!(trailer.starts_with("# config: {\"N\":12,"));
    assert!(trailer.contains("\"n_max\":10"));
    assert!(!text.contains('\r'));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["rd", "--n-max", "3", "--trials", "10"][..],
        &["partition", "--n-max", "4"],
        &["cocycle", "--n-max", "6"],
    ] {
        assert_eq!(stdout(args), stdout(args));
    }
    let a = stdout(&["rd", "--n-max", "3", "--trials", "10", "--seed", "1"]);
    let b = stdout(&["rd", "--n-max", "3", "--trials", "10", "--seed", "2"]);
    assert_ne!(a, b);
}

#[test]
fn exit_codes() {
    assert_eq!(hyprd(&["spherical", "--k", "1"]).status.code(), Some(2));
    assert_eq!(hyprd(&["spherical", "--s-grid", "1:0:0.1"]).status.code(), Some(2));
    assert_eq!(hyprd(&["spherical", "--r", "1.5"]).status.code(), Some(2));
    assert_eq!(hyprd(&["norm", "--f", "blob:3"]).status.code(), Some(2));
    assert_eq!(hyprd(&["bogus"]).status.code(), Some(2));
    assert_eq!(hyprd(&["verify", "--n-max", "4"]).status.code(), Some(0));
}

#[test]
fn environment_overrides_defaults() {
    let out = Command::new(env!("CARGO_BIN_EXE_hyprd"))
        .args(["spherical", "--n-max", "2"])
        .env("HYPRD_K", "3")
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().last().unwrap().contains("\"k\":3"));
    let flag = Command::new(env!("CARGO_BIN_EXE_hyprd"))
        .args(["spherical", "--n-max", "2", "--k", "4"])
        .env("HYPRD_K", "3")
        .output()
        .unwrap();
    assert!(String::from_utf8(flag.stdout).unwrap().contains("\"k\":4"));
}

#[test]
fn norm_sequence_is_nondecreasing() {
    let text = stdout(&["norm", "--N", "4", "--s", "0.3", "--f", "sphere:1"]);
    let json: serde_json::Value = serde_json::from_str(&text).unwrap();
    let seq: Vec<f64> = json["norm_lower_sequence"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(seq.len(), 4);
    assert!(seq.windows(2).all(|w| w[1] >= w[0] - 1e-9), "{seq:?}");
    assert_eq!(json["f_spec"], "sphere:1");
    assert_eq!(json["N_sequence"], serde_json::json!([1, 2, 3, 4]));
}

#[test]
fn out_directory_receives_every_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let out = hyprd(&["counting", "--n-max", "3", "--out", path]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let csv = fs::read_to_string(dir.path().join("counting.csv")).unwrap();
    assert!(csv.lines().last().unwrap().starts_with("# config: "));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("counting_summary.json")).unwrap()).unwrap();
    assert!(summary.is_object());

    let out = hyprd(&["cocycle", "--n-max", "4", "--out", path]);
    assert!(out.status.success());
    assert!(dir.path().join("cocycle.csv").exists());
    assert!(dir.path().join("cocycle_flags.json").exists());
}

#[test]
fn partition_rows_sum_to_one() {
    let text = stdout(&["partition", "--gamma", "abab"]);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("gamma,k,measure,lower,upper"));
    let rows: Vec<Vec<f64>> = lines
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').skip(1).map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 4);
    let total: f64 = rows.iter().map(|r| r[1]).sum();
    assert!((total - 1.0).abs() < 1e-12);
    assert!(rows.iter().all(|r| r[2] <= r[1] && r[1] <= r[3]));
}
