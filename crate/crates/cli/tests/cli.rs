use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn eqpolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eqpolar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.push("--json");
    let o = eqpolar(&all);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

fn csv_lines(path: &Path) -> Vec<String> {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| panic!("{}: {e}", path.display()))
        .lines()
        .map(str::to_string)
        .collect()
}

#[test]
fn analyze_prints_summary_rows() {
    let o = eqpolar(&["analyze-kernel", "--q", "5", "--kernel", "L5b"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("q=5: d_min 2.236, N(d) 4"), "{}", stdout(&o));

    let o = eqpolar(&["analyze-kernel", "--set", "psk8", "--kernel", "standard"]);
    assert!(stdout(&o).contains("d_min 1.082, N(d) 2,2,2,1"), "{}", stdout(&o));
}

#[test]
fn analyze_builtin_kernels_reproduce_summary_table() {
    for (q, name, row) in [
        (3, "L3", "q=3: d_min 2.449, N(d) 2"),
        (4, "L4", "q=4: d_min 2.000, N(d) 1,2"),
        (5, "L5", "q=5: d_min 2.236, N(d) 4"),
        (8, "L8", "q=8: d_min 2.000, N(d) 6,1"),
        (3, "standard", "q=3: d_min 2.449, N(d) 2"),
        (4, "standard", "q=4: d_min 2.000, N(d) 2,1"),
        (5, "standard", "q=5: d_min 1.663, N(d) 2,2"),
    ] {
        let q = q.to_string();
        let o = eqpolar(&["analyze-kernel", "--q", &q, "--kernel", name]);
        assert!(stdout(&o).contains(row), "{name}: {}", stdout(&o));
    }
}

#[test]
fn analyze_m4_on_rotated_set_is_equidistant() {
    let v = json(&["analyze-kernel", "--set", "rotated4", "--kernel", "M4"]);
    let r = &v["result"][0];
    assert_eq!(r["equidistant"], true);
    assert_eq!(r["bound_attained"], true);
    assert_eq!(r["conservation"]["holds"], true);
    assert!(r["conservation"]["warning"].is_string());
    assert_eq!(v["spec"]["q"], 4);
}

#[test]
fn analyze_reports_anomaly() {
    let v = json(&["analyze-kernel", "--q", "8", "--kernel", "L8"]);
    assert_eq!(v["result"][0]["subgroup_anomaly"], serde_json::json!([0, 4]));
}

#[test]
fn search_examples() {
    let v = json(&["search-kernel", "--q", "5"]);
    let best: Vec<Vec<u64>> = serde_json::from_value(v["result"]["best_permutations"].clone()).unwrap();
    assert!(best.contains(&vec![0, 2, 4, 1, 3]));
    assert!(best.contains(&vec![0, 3, 1, 4, 2]));
    assert_eq!(v["result"]["equidistant_found"], true);

    let v = json(&["search-kernel", "--q", "4"]);
    assert_eq!(v["result"]["equidistant_found"], false);

    let v = json(&["search-kernel", "--q", "3", "--full-space"]);
    assert_eq!(v["result"]["best_permutations"].as_array().unwrap().len(), 6);
}

#[test]
fn construct_writes_profile_and_unit_rate_code() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = eqpolar(&[
        "construct", "--q", "5", "--kernel", "standard", "-N", "64", "--trials", "2000", "--out", out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: Value = serde_json::from_slice(&std::fs::read(dir.path().join("construct.json")).unwrap()).unwrap();
    assert_eq!(doc["result"]["info_len"], 27);
    assert_eq!(doc["result"]["code"]["frozen"].as_array().unwrap().len(), 64 - 27);
    let lines = csv_lines(&dir.path().join("reliability.csv"));
    assert!(lines[0].starts_with("# eqpolar construct spec_hash="));
    assert!(lines[0].ends_with("seed=0"));
    assert_eq!(lines[1], "index,error_rate,error_count,frozen");
    assert_eq!(lines.len(), 2 + 64);
}

#[test]
fn construct_profile_has_one_row_per_index() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = eqpolar(&["construct", "--q", "8", "--kernel", "L8", "-N", "256", "--trials", "200", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(csv_lines(&dir.path().join("reliability.csv")).len(), 2 + 256);
}

#[test]
fn zero_trials_is_a_runtime_error() {
    let o = eqpolar(&["construct", "--q", "5", "-N", "64", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
    let o = eqpolar(&["polarization-speed", "--q", "8", "-N", "16", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(eqpolar(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(eqpolar(&["analyze-kernel", "--q", "5", "--kernel", "nope"]).status.code(), Some(1));
    assert_eq!(eqpolar(&["analyze-kernel", "--set", "hexagon"]).status.code(), Some(1));
    assert_eq!(eqpolar(&["analyze-kernel", "--set", "psk"]).status.code(), Some(1));
    assert_eq!(eqpolar(&["bounds", "--q", "5"]).status.code(), Some(1));
    assert_eq!(eqpolar(&["construct", "--q", "5", "-N", "48"]).status.code(), Some(1));
    assert_eq!(eqpolar(&["search-kernel", "--q", "9"]).status.code(), Some(1));
    assert_eq!(eqpolar(&["--help"]).status.code(), Some(0));
}

#[test]
fn simulate_single_point_gives_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = eqpolar(&[
        "simulate",
        "--q",
        "5",
        "--kernel",
        "L5a",
        "-N",
        "16",
        "--snr-db",
        "4",
        "--trials",
        "500",
        "--construction-trials",
        "500",
        "--seed",
        "3",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lines = csv_lines(&dir.path().join("fer_L5a.csv"));
    assert!(lines[0].ends_with("seed=3"));
    assert!(lines[1].starts_with("snr_db,trials,frame_errors,fer"));
    assert_eq!(lines.len(), 3);
    assert!(lines[2].starts_with("4,500,"));
}

#[test]
fn simulate_is_reproducible_and_accepts_constructed_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = eqpolar(&["construct", "--q", "5", "--kernel", "L5a", "-N", "32", "--trials", "1000", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let code = dir.path().join("construct.json");
    let code = code.to_str().unwrap();
    let args = ["simulate", "--q", "5", "--code", code, "--snr-db", "2,3", "--trials", "300", "--json"];
    let a: Value = serde_json::from_slice(&eqpolar(&args).stdout).unwrap();
    let b: Value = serde_json::from_slice(&eqpolar(&args).stdout).unwrap();
    let errors = |v: &Value| -> Vec<u64> {
        v["result"][0]["points"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["frame_errors"].as_u64().unwrap())
            .collect()
    };
    assert_eq!(errors(&a).len(), 2);
    assert_eq!(errors(&a), errors(&b));
    assert_eq!(a["spec_hash"], b["spec_hash"]);
}

#[test]
fn spec_file_drives_a_command_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, r#"{"command": "bounds", "q": 5, "kernels": ["L5a"], "snr_db": [0.0, 5.0]}"#).unwrap();
    let spec = spec.to_str().unwrap();
    let v = json(&["bounds", "--spec", spec]);
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 2);
    let v2 = json(&["bounds", "--spec", spec, "--snr-db", "1"]);
    assert_eq!(v2["result"]["rows"].as_array().unwrap().len(), 1);
    assert_ne!(v["spec_hash"], v2["spec_hash"]);
    // A spec written for another command is rejected.
    assert_eq!(eqpolar(&["simulate", "--spec", spec]).status.code(), Some(1));
}

#[test]
fn bounds_match_closed_forms() {
    let v = json(&["bounds", "--q", "5", "--kernel", "L5a,standard", "--snr-db", "3"]);
    let row = &v["result"]["rows"][0];
    let snr = 10f64.powf(0.3);
    let q = |x: f64| 0.5 * erfc_by_integration(x / 2f64.sqrt());
    let l5 = 4.0 * q(5f64.sqrt() * (snr / 2.0).sqrt());
    let got = row["bounds"][0].as_f64().unwrap();
    assert!((got - l5).abs() < 1e-9 * l5, "{got} vs {l5}");
    assert!(row["bounds"][1].as_f64().unwrap() > got);
    assert!((row["equidistant"].as_f64().unwrap() - l5).abs() < 1e-9 * l5);
}

/// `erfc(x) = 2/sqrt(pi) * int_x^inf exp(-t^2) dt`, by Simpson on
/// `[x, x + 12]`.
fn erfc_by_integration(x: f64) -> f64 {
    let n = 200_000;
    let h = 12.0 / n as f64;
    let f = |t: f64| (-t * t).exp();
    let mut acc = f(x) + f(x + 12.0);
    for k in 1..n {
        acc += if k % 2 == 1 { 4.0 } else { 2.0 } * f(x + k as f64 * h);
    }
    acc * h / 3.0 * 2.0 / std::f64::consts::PI.sqrt()
}

#[test]
fn bounds_for_8psk_include_comparison_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = eqpolar(&["bounds", "--q", "8", "--kernel", "L8", "--snr-db", "0,5,10", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let lines = csv_lines(&dir.path().join("bounds.csv"));
    assert_eq!(lines[1], "snr_db,L8,equidistant,almost_equidistant");
    assert_eq!(lines.len(), 5);
}

#[test]
fn polarization_speed_writes_one_csv_per_variant() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = eqpolar(&["polarization-speed", "--q", "8", "-N", "32", "--trials", "300", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for v in [
        "all-proposed",
        "all-sasoglu",
        "all-standard",
        "channel-stage-only-proposed",
        "channel-stage-only-sasoglu",
    ] {
        let lines = csv_lines(&dir.path().join(format!("reliability_{v}.csv")));
        assert_eq!(lines[1], "rank,index,error_rate");
        assert_eq!(lines.len(), 2 + 32);
    }
    let summary = csv_lines(&dir.path().join("unpolarized.csv"));
    assert_eq!(summary.len(), 2 + 5);
    assert!(stdout(&o).contains("all-proposed"));
}

#[test]
fn unknown_variant_is_a_usage_error() {
    let o = eqpolar(&["polarization-speed", "--q", "8", "-N", "16", "--variants", "all-bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn custom_signal_set_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("set.json");
    std::fs::write(&path, r#"{"q": 3, "es": 1.0, "points": [[1,0],[-0.5,0.8660254037844386],[-0.5,-0.8660254037844386]]}"#)
        .unwrap();
    let v = json(&["analyze-kernel", "--set", path.to_str().unwrap(), "--kernel", "standard"]);
    assert_eq!(v["result"][0]["equidistant"], true);
}
