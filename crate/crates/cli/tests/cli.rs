//! End-to-end tests of the `dimer` binary: exit codes, output formats,
//! determinism under parallelism, and physics spot checks on the
//! emitted numbers.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dimer() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dimer"));
    // Hermetic default: tests that exercise the worker pool set it.
    c.env_remove("DIMER_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    dimer().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("utf-8 stderr")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("config written");
    path
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).expect("output readable");
    let mut lines = text.lines();
    let header: Vec<String> =
        lines.next().expect("header row").split(',').map(str::to_string).collect();
    let rows: Vec<Vec<String>> =
        lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("column {name}"))
}

fn floats(rows: &[Vec<String>], k: usize) -> Vec<f64> {
    rows.iter().map(|r| r[k].parse::<f64>().expect("numeric field")).collect()
}

fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

#[test]
fn reproduce_all_rows_pass() {
    let out = run(&["reproduce"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let data_lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(data_lines.len(), 14);
    assert!(data_lines.iter().all(|l| l.contains(" pass ")));
    assert!(!text.contains("FAIL"));
}

#[test]
fn reproduce_json_round_trips() {
    let out = run(&["reproduce", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    let rows = rows.as_array().expect("array");
    assert_eq!(rows.len(), 14);
    for r in rows {
        for key in ["quantity", "computed", "quoted", "deviation", "tolerance", "status", "reference"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["status"], "pass");
    }
    let shift = rows.iter().find(|r| r["quantity"] == "exchange_shift").expect("row");
    let computed = shift["computed"].as_f64().expect("number");
    assert!((computed / 20858.501224549922 - 1.0).abs() < 1e-14);
}

#[test]
fn zero_tolerance_fails_every_row() {
    let out = run(&["reproduce", "--tol", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert_eq!(text.lines().filter(|l| l.contains(" FAIL ")).count(), 14);
    assert!(stderr(&out).contains("14 of 14"));
}

#[test]
fn rddi_exact_matches_library() {
    let out = run(&["rddi", "--zeta", "0.033", "--theta", "1.5707963267948966"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let value = |name: &str| -> f64 {
        text.lines()
            .find(|l| l.starts_with(&format!("{name} = ")))
            .and_then(|l| l.split(" = ").nth(1))
            .and_then(|v| v.parse().ok())
            .unwrap_or_else(|| panic!("line {name}"))
    };
    assert!((value("delta") / 20858.501224549922 - 1.0).abs() < 1e-12);
    assert!((value("gamma_minus") / 2.1778729419374976e-4 - 1.0).abs() < 1e-12);
    assert!((value("gamma_plus") + value("gamma_minus") - 2.0).abs() < 1e-15);
}

#[test]
fn rddi_flag_conflict_is_usage_error() {
    let out = run(&["rddi", "--zeta", "0.033", "--theta", "1.57", "--exact", "--asymptotic"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn rddi_asymptotic_needs_perpendicular_dipoles() {
    let out = run(&["rddi", "--zeta", "0.033", "--theta", "1.0", "--asymptotic"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("perpendicular"));
}

#[test]
fn sweep_output_independent_of_worker_count() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(
        dir.path(),
        "swap.json",
        r#"{"quantity": "swap", "zeta": 0.033, "xi": {"start": 0.05, "stop": 0.15, "points": 7}}"#,
    );
    let mut bytes = Vec::new();
    for (tag, workers) in [("a", Some("1")), ("b", Some("4")), ("c", None), ("d", Some("1"))] {
        let out_path = dir.path().join(format!("{tag}.csv"));
        let mut cmd = dimer();
        cmd.args(["sweep", "--config"]).arg(&cfg).arg("--out").arg(&out_path);
        if let Some(w) = workers {
            cmd.env("DIMER_WORKERS", w);
        }
        let out = cmd.output().expect("binary runs");
        assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
        bytes.push(std::fs::read(&out_path).expect("output readable"));
    }
    assert_eq!(bytes[0], bytes[1], "1 vs 4 workers");
    assert_eq!(bytes[0], bytes[2], "explicit vs default workers");
    assert_eq!(bytes[0], bytes[3], "rerun of the same config");
}

#[test]
fn sweep_flip_error_follows_cubic_law() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(
        dir.path(),
        "flip.json",
        r#"{"quantity": "flip_optimum",
            "zeta": {"start": 0.01, "stop": 0.05, "points": 9, "spacing": "log"}}"#,
    );
    let out_path = dir.path().join("flip.csv");
    let out = dimer()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let (header, rows) = csv_rows(&out_path);
    assert!(rows.iter().all(|r| r[col(&header, "status")] == "ok"));
    let zeta = floats(&rows, col(&header, "zeta"));
    let err = floats(&rows, col(&header, "design_error"));
    let slope = loglog_slope(&zeta, &err);
    assert!((slope - 3.0).abs() <= 0.01, "slope {slope}");
}

#[test]
fn sweep_rejects_unknown_key() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{"quantity": "rddi", "zeta": 0.033, "quantum": 3}"#,
    );
    let out_path = dir.path().join("bad.csv");
    let out = dimer()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    assert!(err.contains("unknown field") && err.contains("quantum"), "stderr: {err}");
}

#[test]
fn sweep_single_point_matches_reproduce() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(
        dir.path(),
        "one.json",
        r#"{"quantity": "swap", "zeta": 0.033, "xi": 0.1}"#,
    );
    let out_path = dir.path().join("one.csv");
    let out = dimer()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out_path);
    assert_eq!(rows.len(), 1);
    let fidelity = floats(&rows, col(&header, "fidelity"))[0];

    let rep = run(&["reproduce", "--json"]);
    let table: serde_json::Value = serde_json::from_str(&stdout(&rep)).expect("valid json");
    let quoted = table
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["quantity"] == "swap_fidelity")
        .unwrap()["computed"]
        .as_f64()
        .unwrap();
    // Same code path and same inputs: bit-identical through both
    // serializations (17-digit CSV and shortest-round-trip JSON).
    assert_eq!(fidelity, quoted);
}

#[test]
fn sweep_flags_invalid_rows_and_continues() {
    let dir = tempfile::tempdir().expect("tempdir");
    // xi grid starts below zeta: the first rows are invalid geometry.
    let cfg = write_config(
        dir.path(),
        "edge.json",
        r#"{"quantity": "swap", "zeta": 0.033, "xi": {"start": 0.01, "stop": 0.13, "points": 5}}"#,
    );
    let out_path = dir.path().join("edge.csv");
    let out = dimer()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "flagged rows are not a failure");
    let (header, rows) = csv_rows(&out_path);
    assert_eq!(rows.len(), 5);
    let status = col(&header, "status");
    let exchange = col(&header, "exchange");
    assert!(rows[0][status].starts_with("error:"));
    assert_eq!(rows[0][exchange], "nan");
    assert!(rows.last().unwrap()[status] == "ok");
}

#[test]
fn sweep_json_output_parses() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(
        dir.path(),
        "r.json",
        r#"{"quantity": "rddi", "zeta": {"start": 0.02, "stop": 0.08, "points": 4, "spacing": "log"}}"#,
    );
    let out_path = dir.path().join("r_out.json");
    let out = dimer()
        .args(["sweep", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).expect("output readable");
    let rows: serde_json::Value = serde_json::from_str(&text).expect("valid json");
    let rows = rows.as_array().expect("array");
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r["status"], "ok");
        assert!(r["delta"].as_f64().expect("number") > 0.0);
    }
}

#[test]
fn simulate_population_exchange_frequency() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(dir.path(), "m.json", r#"{"model": "eff2minus", "points": 2000}"#);
    let out_path = dir.path().join("m.csv");
    let out = dimer()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let (header, rows) = csv_rows(&out_path);
    let t = floats(&rows, col(&header, "t"));
    let pg = floats(&rows, col(&header, "p_g"));
    let pm = floats(&rows, col(&header, "p_minus"));
    // Quarter population cycle: first zero crossing of p_g - p_minus.
    let mut crossing = None;
    for k in 1..t.len() {
        let (d0, d1) = (pg[k - 1] - pm[k - 1], pg[k] - pm[k]);
        if d0 > 0.0 && d1 <= 0.0 {
            crossing = Some(t[k - 1] + (t[k] - t[k - 1]) * d0 / (d0 - d1));
            break;
        }
    }
    let ts = crossing.expect("population exchange crosses");
    let freq = std::f64::consts::PI / (4.0 * ts);
    let expected = 300.0 * 0.033 / std::f64::consts::SQRT_2;
    assert!((freq / expected - 1.0).abs() <= 1e-3, "freq {freq} vs {expected}");
}

#[test]
fn simulate_zero_drive_is_flat() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(
        dir.path(),
        "z.json",
        r#"{"model": "eff2minus", "drive": 0, "points": 20}"#,
    );
    let out_path = dir.path().join("z.csv");
    let out = dimer()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out_path);
    for p in floats(&rows, col(&header, "p_g")) {
        assert!((p - 1.0).abs() < 1e-12);
    }
    for p in floats(&rows, col(&header, "p_minus")) {
        assert!(p.abs() < 1e-15);
    }
}

#[test]
fn simulate_unknown_model_lists_choices() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(dir.path(), "u.json", r#"{"model": "grid9000"}"#);
    let out = dimer()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("u.csv"))
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(2));
    let err = stderr(&out);
    for name in ["dimer4", "eff2minus", "eff2plus", "twodimer_swap", "twodimer_cphase9"] {
        assert!(err.contains(name), "missing {name} in: {err}");
    }
}

#[test]
fn simulate_swap_transfer_completes() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(dir.path(), "s.json", r#"{"model": "twodimer_swap"}"#);
    let out_path = dir.path().join("s.csv");
    let out = dimer()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out_path);
    let last = rows.last().expect("rows");
    let transferred: f64 = last[col(&header, "p_g_minus")].parse().unwrap();
    let remaining: f64 = last[col(&header, "p_minus_g")].parse().unwrap();
    // Complete half-cycle transfer, attenuated only by subradiant decay.
    assert!(transferred > 0.995, "transferred {transferred}");
    assert!(remaining < 1e-20, "remaining {remaining}");
}

#[test]
fn simulate_cphase_trace_shape() {
    let dir = tempfile::tempdir().expect("tempdir");
    let cfg = write_config(dir.path(), "c.json", r#"{"model": "twodimer_cphase9"}"#);
    let out_path = dir.path().join("c.csv");
    let out = dimer()
        .args(["simulate", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&out_path)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out_path);
    assert_eq!(
        header,
        ["t", "p_gg", "p_g_minus", "p_minus_g", "p_minus_minus", "p_outside", "arg_gg", "norm2"]
    );
    let norm2 = floats(&rows, col(&header, "norm2"));
    for k in 1..norm2.len() {
        assert!(norm2[k] <= norm2[k - 1] * (1.0 + 1e-12), "norm grew at step {k}");
    }
    let p_gg = floats(&rows, col(&header, "p_gg"));
    let arg_gg = floats(&rows, col(&header, "arg_gg"));
    // Full rotation: the population returns while the amplitude keeps
    // a finite accumulated phase.
    assert!(p_gg.last().unwrap() > &0.98);
    assert!(*p_gg.iter().min_by(|a, b| a.total_cmp(b)).unwrap() < 0.1);
    assert!(arg_gg.last().unwrap().abs() > 0.5);
}
