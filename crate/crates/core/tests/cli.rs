use std::path::PathBuf;
use std::process::{Command, Output};

use modesplit::cli::RunRecord;
use serde_json::Value;

fn modesplit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modesplit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn record(args: &[&str]) -> RunRecord {
    let out = modesplit(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    RunRecord::from_text(&String::from_utf8(out.stdout).unwrap()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("modesplit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap()
}

#[test]
fn repeated_runs_are_byte_identical() {
    let commands: [&[&str]; 4] = [
        &["extract", "--state", "amps 0.3 0.5,0.2 -0.4 0.6", "--target", "2,1", "--trials", "3000"],
        &["split", "--state", "oat 5 0.2", "--r", "0.6,0.1", "--t", "0.7,-0.3741657386773941"],
        &["bounds", "--state", "oat 6 0.01:0.5:5", "--format", "csv"],
        &["schmidt", "--state", "fock 3 7", "--nx", "3"],
    ];
    for args in commands {
        let a = modesplit(args);
        let b = modesplit(args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let a = modesplit(&["extract", "--state", "fock 2 4", "--target", "2,2", "--trials", "500", "--seed", "1"]);
    let b = modesplit(&["extract", "--state", "fock 2 4", "--target", "2,2", "--trials", "500", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn split_reports_sector_probability() {
    let rec = record(&["split", "--state", "fock 2 3", "--sector", "2,1"]);
    assert_eq!(rec.command, "split");
    let sector = &rec.results["sectors"][0];
    assert!((num(&sector["probability"]) - 0.375).abs() < 1e-12);
    let coeffs: Vec<f64> = sector["schmidt_coefficients"].as_array().unwrap().iter().map(num).collect();
    assert!((coeffs[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-11);
    assert!((coeffs[1] - (1.0f64 / 3.0).sqrt()).abs() < 1e-11);
}

#[test]
fn amplitude_and_fock_specs_agree() {
    let fock = record(&["split", "--state", "fock 2 3"]);
    let amps = record(&["split", "--state", "amps 0 0 1 0"]);
    assert_eq!(fock.results, amps.results);
}

#[test]
fn record_roundtrips_and_output_flag_writes_file() {
    let path = scratch("record.json");
    let out = modesplit(&["squeeze", "--state", "oat 8 0.1", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let rec = RunRecord::from_text(&text).unwrap();
    assert_eq!(rec.to_text(), text);
    assert!(rec.wall_time_ms.is_none());
    assert!(num(&rec.results["xi_squared"]) < 1.0);
    let timed = record(&["squeeze", "--state", "oat 8 0.1", "--timing"]);
    assert!(timed.wall_time_ms.is_some());
}

#[test]
fn verify_mixing_on_exported_maps() {
    let path = scratch("bs.map");
    let out = modesplit(&["map-export", "--particles", "4", "--r", "0.8", "--t", "0,0.6", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rec = record(&["verify-mixing", path.to_str().unwrap()]);
    assert_eq!(rec.results["passed"], Value::Bool(true));
    assert_eq!(rec.results["nontrivial"], Value::Bool(true));

    let id = scratch("id.map");
    let out = modesplit(&["map-export", "--kind", "identity", "--particles", "3", "--output", id.to_str().unwrap()]);
    assert!(out.status.success());
    let rec = record(&["verify-mixing", id.to_str().unwrap()]);
    assert_eq!(rec.results["passed"], Value::Bool(true));
    assert_eq!(rec.results["nontrivial"], Value::Bool(false));
}

#[test]
fn verify_mixing_locates_violations() {
    let path = scratch("bad.map");
    std::fs::write(
        &path,
        "particles 1\nblock 1 0 0 1\n1,0 0.5,0\n0,0 1,0\nblock 0 1 1 0\n1,0 0,0\n0,0 1,0\n",
    )
    .unwrap();
    let rec = record(&["verify-mixing", path.to_str().unwrap()]);
    assert_eq!(rec.results["passed"], Value::Bool(false));
    let v = &rec.results["violation"];
    assert_eq!(v["block"], Value::String("(1,0;0,1)".into()), "{v}");
}

#[test]
fn malformed_inputs_exit_with_parse_code() {
    let path = scratch("malformed.map");
    std::fs::write(&path, "particles 1\nblock 1 0 0 1\n1,0 zero\n0,0 1,0\n").unwrap();
    let out = modesplit(&["verify-mixing", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 3"), "{err}");

    let out = modesplit(&["split", "--state", "fock 2 x"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
}

#[test]
fn domain_errors_exit_with_one() {
    let out = modesplit(&["extract", "--state", "fock 2 3", "--target", "2,2"]);
    assert_eq!(out.status.code(), Some(1));
    let out = modesplit(&["split", "--state", "fock 2 3", "--r", "1", "--t", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bounds_sweep_csv_has_one_row_per_angle() {
    let out = modesplit(&["bounds", "--state", "oat 6 0.01:0.5:20", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().skip_while(|l| !l.starts_with("theta"));
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), 9);
    let rows: Vec<&str> = lines.take_while(|l| !l.is_empty()).collect();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r.ends_with("true,true")), "{text}");
}

#[test]
fn schmidt_command_reports_agreement() {
    let rec = record(&["schmidt", "--state", "amps 0.1 0.2,0.3 0.4 -0.5 0.6,-0.1", "--nx", "2"]);
    assert_eq!(rec.results["agree"], Value::Bool(true));
    assert!(num(&rec.results["max_deviation"]) < 1e-10);
}
