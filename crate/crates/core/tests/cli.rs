use std::path::Path;
use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bias-gauge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn fixture() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data/table1.csv")
        .display()
        .to_string()
}

#[test]
fn compute_reference_pairs() {
    let o = bin(&["compute", "--e1", "0.1", "--e2", "0.2"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("N per group      213"), "{text}");
    assert!(text.contains("N total (2N)     426"), "{text}");

    let o = bin(&["--format", "json", "compute", "--e1", "0.4", "--e2", "0.2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n_ceiled"], 88);

    let o = bin(&["--format", "json", "compute", "--e1", "0.3", "--e2", "0.3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["n_ceiled"], "unbounded");
}

#[test]
fn compute_honours_alpha_and_sidedness() {
    let one = bin(&[
        "--format", "json", "--alpha", "0.025", "compute", "--e1", "0.1", "--e2", "0.2",
    ]);
    let two = bin(&[
        "--format", "json", "--sided", "two", "compute", "--e1", "0.1", "--e2", "0.2",
    ]);
    let a: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&two.stdout).unwrap();
    assert_eq!(a["n_raw"], b["n_raw"]);
    assert!(a["n_raw"].as_f64().unwrap() > 212.67);
}

#[test]
fn rank_bundled_fixture() {
    let o = bin(&["--format", "json", "rank", &fixture()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let tables = v.as_array().expect("array of blocks");
    assert_eq!(tables.len(), 4);
    let find = |g: &str| tables.iter().find(|t| t["group"] == g).unwrap().clone();
    let ranks = |t: &serde_json::Value, k: &str| -> Vec<u64> {
        let rows = t["rows"].as_array().unwrap();
        rows.iter().map(|r| r[k].as_u64().unwrap()).collect()
    };
    let indian = find("Indian");
    assert_eq!(ranks(&indian, "rank_d"), [5, 1, 2, 3, 4]);
    assert_eq!(ranks(&indian, "rank_n"), [5, 1, 2, 3, 4]);
    assert_eq!(ranks(&find("Asian"), "rank_n"), [2, 5, 3, 4, 1]);
}

#[test]
fn rank_csv_has_rank_columns() {
    let o = bin(&["--format", "csv", "rank", &fixture()]);
    let text = stdout(&o);
    let header = text.lines().next().unwrap();
    assert!(header.ends_with("rank_d,rank_r,rank_n"), "{header}");
    assert!(text.contains("group,pair,kendall_tau_b"));
}

#[test]
fn rank_reports_bad_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    let mut body = std::fs::read_to_string(fixture()).unwrap();
    body.push_str("Asian,alg.9,AF,not-a-number,tpr_percent,\n");
    std::fs::write(&path, body).unwrap();
    let o = bin(&["rank", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 42"), "{err}");
}

#[test]
fn sweep_writes_grid_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let o = bin(&[
        "sweep",
        "--resolution",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("e1,e2,d_err,r_err,n_raw,log_n"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 25);
    // diagonal cells carry the unbounded sentinel
    assert!(rows[0].ends_with(",inf,inf"), "{}", rows[0]);
}

#[test]
fn validate_equal_rates_exceed_cap() {
    let o = bin(&[
        "validate", "--rates", "0.1,0.1", "--n-cap", "1000", "--reps", "2000",
    ]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("exceeds_cap"));
}

#[test]
fn validate_is_reproducible() {
    let args = [
        "validate", "--rates", "0.1,0.2", "--n", "213", "--reps", "20000", "--seed", "7",
    ];
    let a = bin(&args);
    let b = bin(&[&args[..], &["--threads", "1"]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tables_all_pass() {
    let o = bin(&["tables"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["compute", "--e1", "2", "--e2", "0.1"][..],
        &["compute", "--e1", "0.1"][..],
        &["--alpha", "0", "compute", "--e1", "0.1", "--e2", "0.2"][..],
        &["rank", "/nonexistent/file.csv"][..],
        &["validate", "--rates", "0.1"][..],
        &["frobnicate"][..],
    ] {
        let o = bin(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}
