use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn donorqc(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_donorqc"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.json");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const STRIP: &str = r#"{
    "gate": { "kind": "strip", "half_width": "5 nm", "depth": "10 nm", "substrate_distance": "500 nm" },
    "voltages": ["0.5 V", "0.75 V", "1 V"],
    "placement": { "dx": "1 nm", "dz": "0.5 nm" },
    "line_width": "10 kHz"
}"#;

#[test]
fn hic_writes_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(
        dir.path(),
        &["hic", "--set", "gate.kind=disc", "--set", "gate.radius=5 nm", "--set", "gate.depth=10 nm"],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("hic.csv")).unwrap();
    assert!(csv.starts_with("voltage,second_order,first_order_linear,first_order_squared,total,shift_hz\n"));
    assert_eq!(csv.lines().count(), 12);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("hic.json")).unwrap()).unwrap();
    let lin = json["polynomial"]["linear"].as_f64().unwrap();
    assert!((lin - 0.5299).abs() < 1e-3);
    assert!(json["model"].as_str().unwrap().contains("disc"));
}

#[test]
fn missing_gate_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(dir.path(), &["hic"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gate.kind required"));
}

#[test]
fn bad_unit_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(dir.path(), &["hic", "--set", "gate.kind=disc", "--set", "gate.radius=5", "--set", "gate.depth=10 nm"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("gate.radius"));
}

#[test]
fn error_budget_from_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), STRIP);
    let out = donorqc(dir.path(), &["error-budget", "--config", &cfg]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("error_budget.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 3);
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("error_budget.json")).unwrap()).unwrap();
    let v = json["nulling_voltage"].as_f64().unwrap();
    assert!((v - 0.7469).abs() < 1e-3);
}

#[test]
fn error_budget_rejects_disc() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(
        dir.path(),
        &["error-budget", "--set", "gate.kind=disc", "--set", "gate.radius=5 nm", "--set", "gate.depth=10 nm"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_nulling_search_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), STRIP);
    let out = donorqc(
        dir.path(),
        &[
            "error-budget",
            "--config",
            &cfg,
            "--set",
            r#"nulling={"a": ["5 nm", "5 nm"], "c": ["10 nm", "10 nm"], "v": ["0.1 V", "0.2 V"], "points": 5}"#,
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("nulling.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
}

#[test]
fn spectrum_output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--set", r#"spin.beta={"start": 0.5, "stop": 1.5, "points": 41}"#];
    assert!(donorqc(a.path(), &args).status.success());
    assert!(donorqc(b.path(), &args).status.success());
    for f in ["spectrum.csv", "spectrum.json", "anticrossings.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let csv = fs::read_to_string(a.path().join("spectrum.csv")).unwrap();
    assert!(csv.starts_with("beta,level,block,eigenvalue,dominant_state,dominant_weight\n"));
}

#[test]
fn anticross_reports_lowest_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(dir.path(), &["anticross", "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("anticrossings.json")).unwrap()).unwrap();
    let lowest: Vec<(u64, u64)> = json["events"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["lowest"].as_bool().unwrap())
        .map(|e| (e["pair"][0].as_u64().unwrap(), e["pair"][1].as_u64().unwrap()))
        .collect();
    assert_eq!(lowest, vec![(15, 12), (13, 10)]);
    assert!(!dir.path().join("anticrossings.csv").exists());
}

#[test]
fn equal_alpha_writes_strong_field_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(
        dir.path(),
        &[
            "spectrum",
            "--set",
            "spin.alpha_a=0.05",
            "--set",
            "spin.alpha_b=0.05",
            "--set",
            r#"spin.beta={"start": 3, "stop": 10, "points": 8}"#,
            "--format",
            "csv",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(dir.path().join("strong_field_gap.csv")).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    for r in rdr.records() {
        let r = r.unwrap();
        let closed: f64 = r[1].parse().unwrap();
        let numerical: f64 = r[2].parse().unwrap();
        assert!(((numerical - closed) / closed).abs() < 0.05);
    }
}

#[test]
fn unknown_format_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(dir.path(), &["spectrum", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validate_reports_every_criterion() {
    let dir = tempfile::tempdir().unwrap();
    let out = donorqc(dir.path(), &["validate"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert_eq!(stdout.lines().filter(|l| l.starts_with("[PASS]") || l.starts_with("[FAIL]")).count(), 13);
    let all_pass = !stdout.contains("[FAIL]");
    assert_eq!(out.status.success(), all_pass);
    assert!(dir.path().join("validation.json").exists());
}
