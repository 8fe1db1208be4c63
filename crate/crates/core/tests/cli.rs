use std::process::{Command, Output};

use serde_json::Value;

fn igamma(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_igamma"))
        .args(args)
        .env_remove("IGAMMA_MAX_BITS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

#[test]
fn eval_diagonal_point() {
    let o = igamma(&[
        "eval",
        "--a",
        "100",
        "--z",
        "100",
        "--function",
        "Q",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["branch"], "diagonal");
    let x: f64 = v["value"].as_str().unwrap().parse().unwrap();
    assert!((x - 0.5 + 0.0133).abs() < 1e-3, "{x}");
    for key in ["chi", "m_used", "err_estimate", "bits_used"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn eval_exponential() {
    let v = json(&igamma(&[
        "eval",
        "--a",
        "1",
        "--z",
        "3",
        "--function",
        "upper",
        "--format",
        "json",
    ]));
    let x: f64 = v["value"].as_str().unwrap().parse().unwrap();
    assert!((x / (-3f64).exp() - 1.0).abs() < 1e-7, "{x}");
    assert_eq!(v["branch"], "upper_first");
}

#[test]
fn eval_text_output() {
    let o = igamma(&["eval", "--a", "110", "--z", "100", "--function", "P"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("lower_first"), "{text}");
}

#[test]
fn eval_domain_error() {
    let o = igamma(&["eval", "--a", "-1", "--z", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn eval_ceiling_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_igamma"))
        .args(["eval", "--a", "1", "--z", "3", "--function", "upper"])
        .env("IGAMMA_MAX_BITS", "64")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ceiling"));
}

#[test]
fn coeffs_stirling_row() {
    let o = igamma(&[
        "coeffs", "--family", "s3", "--kmax", "20", "--format", "csv",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    for entry in [
        "20,1,1",
        "20,2,524077",
        "20,3,550478241",
        "20,6,89625135600",
    ] {
        assert!(text.lines().any(|l| l == entry), "missing {entry}");
    }
}

#[test]
fn coeffs_e_list() {
    let v = json(&igamma(&["coeffs", "--family", "e", "--kmax", "7"]));
    let e5 = &v["values"][5];
    assert_eq!(e5["n"], "2745493");
    assert_eq!(e5["d"], "8151736320");
}

#[test]
fn coeffs_paris_order_zero() {
    let v = json(&igamma(&["coeffs", "--family", "paris", "--kmax", "0"]));
    assert_eq!(v["A"][0][0]["n"], "1");
    assert_eq!(v["A"][0][0]["d"], "1");
    assert_eq!(v["B"][0].as_array().unwrap().len(), 0);
}

#[test]
fn coeffs_kmax_cap() {
    assert_eq!(
        igamma(&["coeffs", "--family", "e", "--kmax", "31"])
            .status
            .code(),
        Some(2)
    );
    assert!(
        igamma(&["coeffs", "--family", "s3", "--kmax", "31", "--force"])
            .status
            .success()
    );
}

fn read_rows(path: &std::path::Path) -> Vec<csv::StringRecord> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        [
            "a",
            "z",
            "chi",
            "method",
            "m",
            "value",
            "oracle_value",
            "rel_err",
            "err_estimate"
        ]
    );
    r.records().map(|x| x.unwrap()).collect()
}

#[test]
fn accuracy_map_grid() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("map.csv");
    let o = igamma(&[
        "accuracy-map",
        "--a-count",
        "4",
        "--z-count",
        "4",
        "--m",
        "6",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_rows(&path);
    assert_eq!(rows.len(), 16);
    for row in &rows {
        let rel: f64 = row[7].parse().unwrap();
        let est: f64 = row[8].parse().unwrap();
        assert!(rel < 10.0 * est, "{row:?}");
        assert_eq!(&row[4], "6");
    }
}

#[test]
fn accuracy_map_single_diagonal_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("one.csv");
    let o = igamma(&[
        "accuracy-map",
        "--a-min",
        "200",
        "--a-max",
        "200",
        "--a-count",
        "1",
        "--z-min",
        "200",
        "--z-max",
        "200",
        "--z-count",
        "1",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let rows = read_rows(&path);
    assert_eq!(rows.len(), 1);
    assert_eq!(&rows[0][2], "0.0");
    let rel: f64 = rows[0][7].parse().unwrap();
    assert!(rel < 1e-12, "{rel}");
}

#[test]
fn verify_suite() {
    let o = igamma(&["verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));

    let o = igamma(&["verify", "--only", "s3"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        1
    );

    let o = igamma(&["verify", "--only", "s3", "--inject-fault", "s3"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));

    assert_eq!(
        igamma(&["verify", "--only", "bogus"]).status.code(),
        Some(2)
    );
}

#[test]
fn usage_errors() {
    assert_eq!(igamma(&[]).status.code(), Some(2));
    assert_eq!(igamma(&["eval", "--a", "1"]).status.code(), Some(2));
    assert_eq!(
        igamma(&["coeffs", "--family", "nope"]).status.code(),
        Some(2)
    );
    assert!(igamma(&["--help"]).status.success());
}
