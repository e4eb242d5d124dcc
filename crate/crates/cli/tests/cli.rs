mod common;

use std::process::{Command, Output};

use num_complex::Complex64 as C64;
use serde_json::Value;

fn gfl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfl"))
        .args(args)
        .env_remove("GFL_TOLERANCE")
        .env_remove("GFL_JOBS")
        .output()
        .expect("gfl runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn csv_rows(out: &Output) -> (Vec<String>, Vec<Vec<f64>>) {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn sigma_at_the_origin_is_zero() {
    let out = gfl(&["sigma", "--z", "0,0"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &records(&out)[0];
    assert_eq!(r["value"]["re"], 0.0);
    assert_eq!(r["value"]["im"], 0.0);
    assert_eq!(r["log_modulus"], "-inf");
}

#[test]
fn sigma_at_one_half_matches_the_theta_series() {
    let out = gfl(&["sigma", "--z", "0.5,0"]);
    let r = &records(&out)[0];
    let v = r["value"]["re"].as_f64().unwrap();
    let oracle = common::sigma(C64::new(0.5, 0.0)).re;
    assert!((v - oracle).abs() <= 1e-13);
    assert!((v - 0.474_949_379_987_920_6).abs() <= 1e-15);
}

#[test]
fn sigma_log_modulus_is_consistent_with_the_growth_ratio() {
    let r = &records(&gfl(&["sigma", "--z", "3.1,4"]))[0];
    let z = C64::new(3.1, 4.0);
    let ln = r["log_modulus"].as_f64().unwrap();
    let g = r["growth_ratio"].as_f64().unwrap();
    let expect = std::f64::consts::PI * z.norm_sqr() / 2.0 + (g * common::lattice_distance(z)).ln();
    assert!((ln - expect).abs() <= 1e-12 * ln.abs());
    let on_lattice = &records(&gfl(&["sigma", "--z", "3,4"]))[0];
    assert_eq!(on_lattice["log_modulus"], "-inf");
    assert!((on_lattice["growth_ratio"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
}

#[test]
fn malformed_input_exits_with_usage_code() {
    for args in [
        vec!["sigma", "--z", "abc"],
        vec!["sigma", "--z", "1"],
        vec!["sigma", "--z", "nan,0"],
        vec!["verify", "--suite", "nope"],
        vec!["verify", "--suite", "biorth", "--tolerance", "-1"],
        vec!["verify", "--suite", "biorth", "--radius", "1"],
        vec!["verify", "--suite", "biorth", "--jobs", "0"],
        vec!["scan", "--quantity", "gram-minsv", "--radii", "2,x"],
        vec!["scan", "--quantity", "gram-minsv", "--radii", "-1"],
        vec!["scan", "--quantity", "volume"],
        vec!["reconstruct", "hermite:x"],
        vec!["reconstruct", "wavelet:3"],
        vec!["bogus"],
    ] {
        let out = gfl(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!String::from_utf8_lossy(&out.stderr).contains("panicked"), "{args:?}");
    }
    let out = Command::new(env!("CARGO_BIN_EXE_gfl"))
        .args(["verify", "--suite", "biorth"])
        .env("GFL_TOLERANCE", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn biorth_suite_passes_and_echoes_config() {
    let out = gfl(&["verify", "--suite", "biorth", "--radius", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    assert!(!recs.is_empty());
    for r in &recs {
        assert_eq!(r["pass"], true);
        assert_eq!(r["config"]["radius"], 4.0);
        assert_eq!(r["config"]["command"], "verify");
        assert!(r["error_bound"].is_number());
    }
}

#[test]
fn records_have_sorted_keys() {
    let out = gfl(&["verify", "--suite", "biorth", "--radius", "3"]);
    let line = String::from_utf8(out.stdout).unwrap();
    let first = line.lines().next().unwrap();
    let keys: Vec<String> = match serde_json::from_str::<Value>(first).unwrap() {
        Value::Object(m) => m.keys().cloned().collect(),
        _ => panic!("record is not an object"),
    };
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let positions: Vec<usize> = keys.iter().map(|k| first.find(&format!("\"{k}\"")).unwrap()).collect();
    assert!(positions.windows(2).all(|p| p[0] < p[1]));
}

#[test]
fn sampling_suite_includes_the_lattice_constant() {
    let out = gfl(&["verify", "--suite", "sampling"]);
    assert_eq!(out.status.code(), Some(0));
    let recs = records(&out);
    let c = recs.iter().find(|r| r["op"] == "sampling_constant").unwrap();
    assert!((c["value"].as_f64().unwrap() - 0.18034).abs() <= 1e-4);
}

#[test]
fn environment_sets_tolerance_and_flags_override_it() {
    let env_only = Command::new(env!("CARGO_BIN_EXE_gfl"))
        .args(["verify", "--suite", "biorth", "--radius", "2"])
        .env("GFL_TOLERANCE", "1e-6")
        .output()
        .unwrap();
    assert_eq!(records(&env_only)[0]["config"]["tolerance"], 1e-6);
    let both = Command::new(env!("CARGO_BIN_EXE_gfl"))
        .args(["verify", "--suite", "biorth", "--radius", "2", "--tolerance", "1e-4"])
        .env("GFL_TOLERANCE", "1e-6")
        .output()
        .unwrap();
    assert_eq!(records(&both)[0]["config"]["tolerance"], 1e-4);
    assert_eq!(
        records(&gfl(&["verify", "--suite", "biorth", "--radius", "2"]))[0]["config"]["tolerance"],
        1e-8
    );
}

#[test]
fn output_does_not_depend_on_job_count() {
    let one = gfl(&["verify", "--suite", "sigma", "--seed", "3", "--jobs", "1"]);
    let four = gfl(&["verify", "--suite", "sigma", "--seed", "3", "--jobs", "4"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn looser_tolerance_still_passes() {
    let out = gfl(&["verify", "--suite", "all", "--tolerance", "1e-3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(records(&out).iter().all(|r| r["pass"] == true));
}

#[test]
fn gram_scan_is_decreasing() {
    let out = gfl(&[
        "scan",
        "--quantity",
        "gram-minsv",
        "--radii",
        "2,3,4,5",
        "--format",
        "csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&out);
    let col = header.iter().position(|h| h == "min_singular_value").unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|p| p[1][col] < p[0][col]));
}

#[test]
fn density_scan_tends_to_one() {
    let out = gfl(&["scan", "--quantity", "density", "--radii", "5,10,20", "--format", "csv"]);
    let (header, rows) = csv_rows(&out);
    let col = header.iter().position(|h| h == "density").unwrap();
    let dev: Vec<f64> = rows.iter().map(|r| (r[col] - 1.0).abs()).collect();
    assert!(dev.windows(2).all(|p| p[1] < p[0]));
    assert!(dev[2] < 1e-3);
}

#[test]
fn empty_scan_range_gives_header_only() {
    let out = gfl(&["scan", "--quantity", "growth-ratio", "--radii", "", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("radius,"));
}

#[test]
fn other_scans_emit_one_record_per_radius() {
    let g = records(&gfl(&["scan", "--quantity", "growth-ratio", "--radii", "2,4"]));
    assert_eq!(g.len(), 2);
    assert!(g.iter().all(|r| r["value"].as_f64().unwrap() <= 10.0));
    let c = records(&gfl(&[
        "scan",
        "--quantity",
        "coeff-bound",
        "--radii",
        "4,8",
        "--seed",
        "1",
    ]));
    assert_eq!(c.len(), 2);
    assert!((c[1]["value"].as_f64().unwrap() - 0.795_069_005_725_390).abs() <= 1e-12);
}

#[test]
fn reconstruction_commands() {
    let h = gfl(&["reconstruct", "hermite:3"]);
    assert_eq!(h.status.code(), Some(0));
    let recs = records(&h);
    assert_eq!(recs.len(), 5);
    let res: Vec<f64> = recs[..4].iter().map(|r| r["value"].as_f64().unwrap()).collect();
    assert!(res.windows(2).all(|p| p[1] < p[0]));
    assert_eq!(recs[4]["op"], "reconstruction_trend");

    let a = gfl(&["reconstruct", "atom:0,1", "--radii", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(records(&a)[0]["value"].as_f64().unwrap() < 1e-10);

    let many = gfl(&["reconstruct", "atoms:5", "--radii", "3,4,5", "--seed", "11"]);
    assert_eq!(many.status.code(), Some(0));
}

#[test]
fn output_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("gfl-test-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let out = gfl(&[
        "scan",
        "--quantity",
        "density",
        "--radii",
        "5",
        "--format",
        "csv",
        "--output",
        p,
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(text.starts_with("radius,points,density"));
}
