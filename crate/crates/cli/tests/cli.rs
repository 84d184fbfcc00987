use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn vstates(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vstates"))
        .args(args)
        .output()
        .expect("spawn vstates")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

/// Data rows of a `#`-commented CSV, header row excluded.
fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let i = header.iter().position(|h| h == name).unwrap();
    rows.iter().map(|r| r[i].parse().unwrap()).collect()
}

#[test]
fn euler_closed_spectrum_csv() {
    let o = vstates(&[
        "spectrum", "--model", "euler", "--b", "1", "--n-max", "8", "--method", "closed", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("# vstates spectrum"));
    let (h, rows) = csv_rows(&text);
    assert_eq!(h, ["n", "lambda", "omega", "method", "err_estimate"]);
    assert_eq!(rows.len(), 8);
    for (k, w) in column(&h, &rows, "omega").iter().enumerate() {
        let n = (k + 1) as f64;
        assert!((w - (n - 1.0) / (2.0 * n)).abs() < 1e-15, "n={n} omega={w}");
    }
}

#[test]
fn qgsw_direct_matches_closed() {
    let run = |method: &str| {
        let o = vstates(&[
            "spectrum", "--model", "qgsw", "--param", "eps=1", "--b", "1", "--n-max", "4", "--method", method,
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let (h, rows) = csv_rows(&stdout(&o));
        column(&h, &rows, "lambda")
    };
    let d = run("direct");
    let c = run("closed");
    assert_eq!(d.len(), 4);
    for (x, y) in d.iter().zip(&c) {
        assert!((x - y).abs() <= 1e-9, "{x} vs {y}");
    }
}

#[test]
fn unknown_param_exits_one() {
    let o = vstates(&["spectrum", "--model", "euler", "--param", "gamma=1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("gamma"));
    let o = vstates(&["spectrum", "--model", "gsqg", "--param", "gamma=1", "--b", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("beta"), "{}", stderr(&o));
}

#[test]
fn bad_values_exit_one() {
    assert_eq!(vstates(&["spectrum", "--model", "euler", "--b", "-1"]).status.code(), Some(1));
    assert_eq!(vstates(&["spectrum", "--model", "nope", "--b", "1"]).status.code(), Some(1));
    assert_eq!(vstates(&["spectrum", "--model", "euler-disc", "--b", "1.5"]).status.code(), Some(1));
    assert_eq!(vstates(&["verify", "--suite", "nope"]).status.code(), Some(1));
    assert_eq!(vstates(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(vstates(&["--help"]).status.code(), Some(0));
}

fn verify_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["verify"];
    full.extend_from_slice(args);
    let o = vstates(&full);
    let code = o.status.code().unwrap();
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn verify_factorization_gsqg() {
    let (code, v) = verify_json(&["--suite", "factorization", "--model", "gsqg", "--param", "beta=0.5"]);
    assert_eq!(code, 0);
    assert_eq!(v["suite"], "factorization");
    assert!(v["passes"].as_u64().unwrap() > 0);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_chi_bounds_euler() {
    let (code, v) = verify_json(&["--suite", "chi-bounds", "--model", "euler"]);
    assert_eq!(code, 0);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_convexity_qgsw_flags_conjecture() {
    let (code, v) = verify_json(&["--suite", "convexity", "--model", "qgsw", "--param", "eps=1"]);
    assert_eq!(code, 0);
    assert_eq!(v["flag"], "conjecture");
}

#[test]
fn verify_disc_series() {
    let (code, v) = verify_json(&["--suite", "disc-series", "--model", "euler-disc"]);
    assert_eq!(code, 0, "{v}");
    let (code, _) = verify_json(&["--suite", "disc-series", "--model", "euler"]);
    assert_eq!(code, 1);
}

#[test]
fn euler_branch_first_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("br.json");
    let o = vstates(&[
        "branch", "--model", "euler", "--m", "2", "--b", "1", "--xi-max", "0.15", "--steps", "15",
        "--output", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 16);
    assert!((pts[0]["omega"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    for p in pts {
        assert!(p["residual"].as_f64().unwrap() < 1e-8);
    }
    for k in 0..16 {
        assert!(dir.path().join(format!("br_point{k:03}.csv")).exists());
    }
}

#[test]
fn gsqg_disc_branch_rejected() {
    let o = vstates(&["branch", "--model", "gsqg-disc", "--param", "beta=0.5", "--m", "2", "--b", "0.5", "--xi-max", "0.05"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("model not supported for continuation"));
}

#[test]
fn euler_disc_branch_first_point() {
    let o = vstates(&["branch", "--model", "euler-disc", "--m", "2", "--b", "0.5", "--xi-max", "0.05", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["points"][0]["omega"].as_f64().unwrap() - 0.265625).abs() < 1e-12);
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn json_and_csv_round_trip_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let json = dir.path().join("s.json");
    let base = ["spectrum", "--model", "gsqg", "--param", "beta=0.3", "--b", "1.3", "--n-max", "6"];
    let mut a = base.to_vec();
    a.extend(["--format", "csv", "--output", csv.to_str().unwrap()]);
    assert_eq!(vstates(&a).status.code(), Some(0));
    let mut a = base.to_vec();
    a.extend(["--format", "json", "--output", json.to_str().unwrap()]);
    assert_eq!(vstates(&a).status.code(), Some(0));

    let (h, rows) = csv_rows(&read(&csv));
    let v: Value = serde_json::from_str(&read(&json)).unwrap();
    let entries = v["entries"].as_array().unwrap();
    let lam = column(&h, &rows, "lambda");
    let om = column(&h, &rows, "omega");
    assert_eq!(entries.len(), lam.len());
    for (k, e) in entries.iter().enumerate() {
        let lj = e["lambda"].as_f64().unwrap();
        let oj = e["omega"].as_f64().unwrap();
        assert_eq!(lj.to_bits(), lam[k].to_bits());
        assert_eq!(oj.to_bits(), om[k].to_bits());
        // printed text parses back to the same bits
        assert_eq!(format!("{lj:?}").parse::<f64>().unwrap().to_bits(), lj.to_bits());
    }
    // re-serializing the parsed JSON reproduces the file
    let again = serde_json::to_string_pretty(&v).unwrap() + "\n";
    assert_eq!(again, read(&json));
}

#[test]
fn phi_profile_rows() {
    let o = vstates(&["phi", "--n", "1,3", "--x-min", "0.01", "--x-max", "100", "--points", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = csv_rows(&stdout(&o));
    assert_eq!(rows.len(), 10);
    let phi = column(&h, &rows, "phi");
    let lo = column(&h, &rows, "lower_bound");
    let hi = column(&h, &rows, "upper_bound");
    for k in 0..phi.len() {
        assert!(phi[k] > 0.0 && phi[k] >= lo[k] * (1.0 - 1e-12) && phi[k] <= hi[k] * (1.0 + 1e-12));
    }
}

#[test]
fn models_lists_every_id() {
    let o = vstates(&["models", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let ids: Vec<&str> = v.as_array().unwrap().iter().map(|m| m["id"].as_str().unwrap()).collect();
    for id in ["euler", "gsqg", "qgsw", "euler-alpha", "euler-disc", "gsqg-disc", "qgsw-disc"] {
        assert!(ids.contains(&id), "{id}");
    }
}
