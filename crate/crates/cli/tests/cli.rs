use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn chaoslab(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chaoslab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn summary(out: &Path) -> Value {
    let text = std::fs::read_to_string(out.join("summary.json")).expect("summary.json");
    serde_json::from_str(&text).expect("valid JSON")
}

fn csv_rows(path: &Path) -> (String, Vec<Vec<f64>>) {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn malformed_initial_state_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(dir.path(), &["simulate", "--ic", "1,x,0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = chaoslab(dir.path(), &["simulate", "--ic", "1,2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "t_end = 5\nbogus_key = 1\n").unwrap();
    let out = chaoslab(dir.path(), &["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus_key"));
}

#[test]
fn negative_start_stays_on_the_negative_attractor() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(
        dir.path(),
        &["simulate", "--a8", "1.2", "--ic", "-1,-1,0", "--t-end", "100", "--transient", "20"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&dir.path().join("trajectory.csv"));
    assert_eq!(header, "t,x,y,z");
    assert!(rows.len() > 1000);
    assert!(rows.iter().all(|r| r[0] >= 20.0 && r[1] < 0.0));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# short run\nt_end = 3\nmode = fixed\nstep = 0.01\n").unwrap();
    let out = chaoslab(
        dir.path(),
        &["simulate", "--config", cfg.to_str().unwrap(), "--t-end", "2"],
    );
    assert!(out.status.success());
    let (_, rows) = csv_rows(&dir.path().join("trajectory.csv"));
    assert_eq!(rows.len(), 201);
    assert!((rows.last().unwrap()[0] - 2.0).abs() < 1e-12);
}

#[test]
fn multistable_circuit_uses_83k() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(dir.path(), &["circuit", "--a8", "1.2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path());
    assert_eq!(s["resistors"]["R8"].as_f64(), Some(83e3));
    assert_eq!(s["resistors"]["R1"].as_f64(), Some(1e6));
    assert_eq!(s["invert_a8"].as_bool(), Some(false));
    let bom = std::fs::read_to_string(dir.path().join("bom.txt")).unwrap();
    assert!(bom.contains("R8"));
}

#[test]
fn lyapunov_summary_keys() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(
        dir.path(),
        &["lyapunov", "--iterations", "20000", "--transient", "10"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let s = summary(dir.path());
    for key in ["L1", "L2", "L3", "sum", "dky", "mean_divergence", "step", "iterations"] {
        assert!(s.get(key).is_some(), "missing {key}");
    }
    assert_eq!(s["iterations"].as_u64(), Some(20000));
    let printed: Value = serde_json::from_slice(&out.stdout).expect("stdout is the summary");
    assert_eq!(printed, s);
    let (header, rows) = csv_rows(&dir.path().join("lyapunov_trace.csv"));
    assert_eq!(header, "t,L1,L2,L3");
    assert!(!rows.is_empty());
}

#[test]
fn runs_are_byte_identical() {
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = tempfile::tempdir().unwrap();
            let out = chaoslab(dir.path(), &["simulate", "--t-end", "20"]);
            assert!(out.status.success());
            let csv = std::fs::read(dir.path().join("trajectory.csv")).unwrap();
            let json = std::fs::read(dir.path().join("summary.json")).unwrap();
            (csv, json)
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn escape_reports_numerical_failure() {
    let dir = tempfile::tempdir().unwrap();
    // a8 = 1.45 lies beyond the chaotic range and the orbit escapes
    let out = chaoslab(dir.path(), &["simulate", "--a8", "1.45", "--ic", "0.1001,0.1003,0.1003"]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(summary(dir.path())["terminal"]["kind"], "escaped");
}

#[test]
fn robot_writes_mask_and_stays_inside() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(dir.path(), &["robot", "--t-end", "50", "--xmax", "31.6"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let mask = std::fs::read_to_string(dir.path().join("coverage_mask.txt")).unwrap();
    assert_eq!(mask.lines().count(), 10);
    let (header, rows) = csv_rows(&dir.path().join("robot.csv"));
    assert_eq!(header, "t,x,y,z,X,Y,theta,v,mu,covered_fraction");
    assert!(rows.iter().all(|r| (0.0..=10.0).contains(&r[4]) && (0.0..=10.0).contains(&r[5])));
    assert!(rows.windows(2).all(|w| w[1][9] >= w[0][9]));
}

#[test]
fn basin_image_has_requested_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = chaoslab(
        dir.path(),
        &["basin", "--nx", "8", "--ny", "6", "--t-max", "300"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ppm = std::fs::read(dir.path().join("basin.ppm")).unwrap();
    assert!(ppm.starts_with(b"P6\n8 6\n255\n"));
    assert_eq!(ppm.len(), b"P6\n8 6\n255\n".len() + 8 * 6 * 3);
}
