use std::process::{Command, Output};

use octograv::tables::{DenseTable, StructureTable, StructureTables, TableEntry, TableName};
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_octograv"))
        .args(args)
        .env_remove("OCTOGRAV_SEED")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn entries(v: &Value) -> Vec<TableEntry> {
    serde_json::from_value(v["entries"].clone()).unwrap()
}

#[test]
fn dump_counts_and_chi_entries_are_pure() {
    let eps3 = json(&["dump-tables", "--table", "eps3", "--out", "json"]);
    assert_eq!(entries(&eps3).len(), 6);
    let psi = json(&["dump-tables", "--table", "psi", "--out", "json"]);
    assert_eq!(entries(&psi).len(), 42);
    assert_eq!(psi["rank"], 3);
    let chi = json(&["dump-tables", "--table", "chiL", "--out", "json"]);
    let chi = entries(&chi);
    assert_eq!(chi.len(), 168 + 168);
    assert!(chi.iter().all(|e| e.re * e.im == 0.0));
    let eps4 = json(&["dump-tables", "--table", "eps4", "--out", "json"]);
    assert_eq!(entries(&eps4).len(), 24);
}

#[test]
fn json_dump_round_trips_every_table() {
    let all = json(&["dump-tables", "--out", "json"]);
    let tables = StructureTables::build().unwrap();
    let dumps = all.as_array().unwrap();
    assert_eq!(dumps.len(), TableName::ALL.len());
    for d in dumps {
        let name: TableName = serde_json::from_value(d["table"].clone()).unwrap();
        let rebuilt = DenseTable::from_entries(name, &entries(d)).unwrap();
        assert_eq!(rebuilt, DenseTable::from_table(tables.table(name)), "{}", name.as_str());
        assert_eq!(rebuilt.antisymmetry_residual(), 0.0);
    }
}

#[test]
fn output_is_deterministic_and_seeded() {
    let args = ["lagrangian", "--scenario", "random-smooth8", "--points", "4", "--seed", "9", "--out", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let seq = run(&[&args[..], &["--sequential"]].concat());
    assert_eq!(a.stdout, seq.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_octograv"))
        .args(&args[..5])
        .args(["--out", "json"])
        .env("OCTOGRAV_SEED", "9")
        .output()
        .unwrap();
    assert!(env.status.success());
    assert_eq!(String::from_utf8_lossy(&a.stdout), String::from_utf8_lossy(&env.stdout));
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let rows = v["results"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r["index"], i);
        assert!(r["value"]["re"].is_f64() && r["value"]["im"].is_f64());
    }
}

#[test]
fn de_sitter_origin_value() {
    let v = json(&["lagrangian", "--scenario", "de-sitter", "--hubble", "0.1", "--at", "0,0,0,0", "--out", "json"]);
    let re = v["results"][0]["value"]["re"].as_f64().unwrap();
    assert!((re - 0.12).abs() < 1e-12, "{re}");
    let out = run(&["lagrangian", "--scenario", "de-sitter", "--form", "eh4", "--points", "3", "--out", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    assert!(text.starts_with("index,point,value_re,value_im"));
}

#[test]
fn crosscheck_passes_on_all_scenarios() {
    for s in ["flat4", "schwarzschild", "de-sitter", "flat8", "diagonal-warped8", "random-smooth8"] {
        let out = run(&["crosscheck", "--scenario", s, "--points", "3"]);
        assert!(out.status.success(), "{s}: {}", String::from_utf8_lossy(&out.stdout));
    }
    let v = json(&["crosscheck", "--scenario", "schwarzschild", "--provider", "fd", "--points", "4", "--out", "json"]);
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify-algebra", "--samples", "300"]).status.code(), Some(0));
    assert_eq!(run(&["verify-algebra", "--samples", "50", "--inject-fault", "psi"]).status.code(), Some(1));
    assert_eq!(run(&["verify-algebra", "--samples", "50", "--inject-fault", "chi"]).status.code(), Some(1));
    assert_eq!(run(&["lagrangian", "--scenario", "nowhere"]).status.code(), Some(2));
    assert_eq!(run(&["lagrangian", "--scenario", "flat4", "--form", "chi8"]).status.code(), Some(2));
    assert_eq!(run(&["lagrangian", "--scenario", "flat4", "--at", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["dump-tables", "--table", "omega"]).status.code(), Some(2));
    assert_eq!(run(&["lagrangian", "--scenario", "random-smooth8", "--amplitude", "0.2"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    // inside the horizon the static frame is not real
    assert_eq!(
        run(&["lagrangian", "--scenario", "schwarzschild", "--at", "0,1.5,1,0"]).status.code(),
        Some(3)
    );
}

#[test]
fn run_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "scenario = \"de-sitter\"\nhubble = 0.2\npoints = 2\nseed = 3\nform = \"vierbein4\"\n").unwrap();
    let p = path.to_str().unwrap();
    let v = json(&["lagrangian", "--config", p, "--out", "json"]);
    assert_eq!(v["form"], "vierbein4");
    assert_eq!(v["scenario"]["hubble"], 0.2);
    assert_eq!(v["results"].as_array().unwrap().len(), 2);
    let v = json(&["lagrangian", "--config", p, "--points", "5", "--form", "dd4", "--out", "json"]);
    assert_eq!(v["form"], "dd4");
    assert_eq!(v["results"].as_array().unwrap().len(), 5);
    std::fs::write(&path, "scenari = \"typo\"\n").unwrap();
    assert_eq!(run(&["lagrangian", "--config", p]).status.code(), Some(2));
}
