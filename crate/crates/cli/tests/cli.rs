//! End-to-end checks of the binary: exit-code policy, CSV format,
//! determinism, and round-trip parseability.

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, config: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("config.json");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_wavecusp"))
        .arg("--config")
        .arg(&cfg)
        .arg("--output")
        .arg(dir)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn classify_reports_nonphysical_with_success_exit() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        r#"{"version":1,"command":"classify","potential":{"terms":[{"strength":-1.0,"exponent":6.0}]}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert_eq!(stdout(&out).trim(), "NONPHYSICAL-aVdW");
}

#[test]
fn solve_rejects_nonphysical_with_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        r#"{"version":1,"command":"solve","potential":{"terms":[{"strength":-1.0,"exponent":6.0}]},"l":0,"energies":[1.0],"grid":{"r_max":4.0,"n":128}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(3), "{out:?}");
}

#[test]
fn unknown_config_key_is_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), r#"{"version":1,"command":"classify","typo":4}"#, &[]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
    let out = run(dir.path(), r#"{"version":2,"command":"classify"}"#, &[]);
    assert_eq!(out.status.code(), Some(2), "{out:?}");
}

#[test]
fn rigidity_check_free_model_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        r#"{"version":1,"command":"rigidity-check","potential":{},"l":0,"energies":[1.0],"radii":[0.5,1.0,2.0,3.0],"grid":{"r_max":6.0,"n":512}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("rigidity_check.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config sha256 = "));
    let header = lines.next().unwrap();
    assert_eq!(header, "r,P,G,dL_de,dR_de,residual1,residual2");
    let mut rows = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols.len(), 7);
        for res in &cols[5..] {
            if *res != "nan" {
                assert!(res.parse::<f64>().unwrap() < 1e-6, "residual {res}");
            }
        }
        rows += 1;
    }
    assert_eq!(rows, 4);
}

#[test]
fn identical_config_and_seed_give_identical_bytes() {
    let config = r#"{"version":1,"command":"solve","potential":{"terms":[{"strength":-1.0,"exponent":1.0}]},"l":0,"energies":[-1.0,0.25,1.0],"grid":{"r_max":5.0,"n":256},"seed":7}"#;
    let (da, db) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let oa = run(da.path(), config, &["--threads", "3"]);
    let ob = run(db.path(), config, &["--threads", "1"]);
    assert_eq!(oa.status.code(), Some(0), "{oa:?}");
    assert_eq!(ob.status.code(), Some(0), "{ob:?}");
    let a = std::fs::read(da.path().join("solve.csv")).unwrap();
    let b = std::fs::read(db.path().join("solve.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn csv_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        dir.path(),
        r#"{"version":1,"command":"solve","potential":{},"l":1,"energies":[4.0],"grid":{"r_max":3.0,"n":128}}"#,
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let csv = std::fs::read_to_string(dir.path().join("solve.csv")).unwrap();
    assert!(csv.ends_with('\n') && !csv.contains('\r'));
    for line in csv.lines().skip(2) {
        for field in line.split(',') {
            // 17 significant digits: parse and re-format reproduces the text
            let v: f64 = field.parse().unwrap();
            assert_eq!(format!("{v:.16e}"), field);
        }
    }
}

#[test]
fn separability_sweep_runs() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"version":1,"command":"separability","particles":{
        "masses":[1.0,2.0,1.0],
        "positions":[{"x":-0.2,"y":0.0,"z":0.0},{"x":0.1,"y":0.0,"z":0.0},{"x":3.0,"y":4.0,"z":0.0}],
        "pair":[0,1],
        "pair_potentials":[
            {"a":0,"b":2,"model":{"terms":[{"strength":-1.0,"exponent":1.0}]}},
            {"a":1,"b":2,"model":{"terms":[{"strength":-1.0,"exponent":1.0}]}}
        ]},
        "r_sweep":[0.001,0.002,0.005,0.01,0.02,0.05]}"#;
    let out = run(dir.path(), config, &[]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let msg = stdout(&out);
    let slope: f64 = msg
        .split("slope = ")
        .nth(1)
        .and_then(|s| s.split(',').next())
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 1.0).abs() < 0.02, "{msg}");
    let csv = std::fs::read_to_string(dir.path().join("separability.csv")).unwrap();
    assert_eq!(csv.lines().count(), 8);
}
