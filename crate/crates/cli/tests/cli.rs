use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geodiscord")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn gen(dir: &Path, name: &str) -> PathBuf {
    let path = dir.join(format!("{}.json", name.replace(['(', ')', ','], "_")));
    let o = run(&["gen", "--name", name, "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    path
}

fn write(dir: &Path, file: &str, text: &str) -> PathBuf {
    let path = dir.join(file);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn ghz_discord_text_and_json() {
    let dir = TempDir::new().unwrap();
    let f = gen(dir.path(), "ghz(3)");
    let o = run(&["discord", "--state", f.to_str().unwrap(), "--part", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("D_2 = 0.5\n"), "{}", stdout(&o));

    let o = run(&["discord", "--state", f.to_str().unwrap(), "--part", "1", "--oracle", "--grid", "61,120,3", "--json"]);
    let v = json(&o);
    assert_eq!(v["kind"], "closed-form");
    assert!((v["report"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(v["gap"].as_f64().unwrap() < 1e-6);
}

#[test]
fn qudit_party_reports_an_upper_bound() {
    let dir = TempDir::new().unwrap();
    let f = gen(dir.path(), "max-mixed(3,2)");
    let o = run(&["discord", "--state", f.to_str().unwrap(), "--part", "1", "--restarts", "2", "--json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["kind"], "upper-bound");
    assert!(v["report"]["value"].as_f64().unwrap().abs() < 1e-12);
    let o = run(&["discord", "--state", f.to_str().unwrap(), "--part", "1", "--oracle"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn total_respects_order() {
    let dir = TempDir::new().unwrap();
    let f = gen(dir.path(), "bell");
    let o = run(&["total", "--state", f.to_str().unwrap(), "--json"]);
    let v = json(&o);
    assert!((v["q_value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let w = gen(dir.path(), "w(3)");
    let o = run(&["total", "--state", w.to_str().unwrap(), "--order", "3,1,2", "--json"]);
    let v = json(&o);
    let order: Vec<u64> = v["order"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).collect();
    assert_eq!(order, [3, 1, 2]);
    assert!((v["steps"][0]["discord"].as_f64().unwrap() - 4.0 / 9.0).abs() < 1e-12);
    let o = run(&["total", "--state", w.to_str().unwrap(), "--order", "1,1,2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sweep_writes_csv() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("s.csv");
    let o = run(&["sweep", "--family", "ghz-noise", "--from", "0", "--to", "1", "--steps", "101", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,d1,d2,d3,q"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 101);
    for r in &rows {
        assert!((r[1] - r[0] * r[0] / 2.0).abs() < 1e-10);
    }
    let o = run(&["sweep", "--family", "w-ghz", "--steps", "201", "--parties", "1", "--crossings", "1", "--json"]);
    let v = json(&o);
    let p = v["crossings"][0]["p"].as_f64().unwrap();
    assert!((p - 0.75).abs() < 1e-6);
    assert_eq!(v["sweep"]["rows"].as_array().unwrap().len(), 201);
}

#[test]
fn sweep_rejects_bad_input() {
    assert_eq!(run(&["sweep", "--family", "ghz-noise", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--family", "nope"]).status.code(), Some(3));
}

const BELL_TABLE: &str = "label,value\nXX,1\nYY,-1\nZZ,1\nIX,0\nIY,0\nIZ,0\nXI,0\nYI,0\nZI,0\nXY,0\nXZ,0\nYX,0\nYZ,0\nZX,0\nZY,0\n";

#[test]
fn ingest_bell_table() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "bell.csv", BELL_TABLE);
    let o = run(&["ingest", "--pauli", f.to_str().unwrap(), "--part", "1", "--strict"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o), "D_1 = 0.5\n");

    let missing = write(dir.path(), "m.csv", &BELL_TABLE.replace("XY,0\n", ""));
    let o = run(&["ingest", "--pauli", missing.to_str().unwrap(), "--part", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("\"XY\""), "{}", stderr(&o));
}

#[test]
fn ingest_nonphysical_table() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "bad.csv", &BELL_TABLE.replace("YY,-1", "YY,1"));
    let o = run(&["ingest", "--pauli", f.to_str().unwrap(), "--part", "1", "--strict"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("positivity"));
    let o = run(&["ingest", "--pauli", f.to_str().unwrap(), "--part", "1", "--json"]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("warning"));
    assert_eq!(json(&o)["warnings"].as_array().unwrap().len(), 1);
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let trace = write(dir.path(), "t.json", r#"{"dims": [2], "matrix": [[[1, 0], [0, 0]], [[0, 0], [-0.02, 0]]]}"#);
    let o = run(&["discord", "--state", trace.to_str().unwrap(), "--part", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("trace") && stderr(&o).contains("0.98"), "{}", stderr(&o));

    let herm = write(dir.path(), "h.json", r#"{"dims": [2], "matrix": [[[0.5, 0], [0.1, 0]], [[0.2, 0], [0.5, 0]]]}"#);
    let o = run(&["discord", "--state", herm.to_str().unwrap(), "--part", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("hermiticity") && stderr(&o).contains("(0, 1)"), "{}", stderr(&o));

    let junk = write(dir.path(), "j.json", "{not json");
    assert_eq!(run(&["discord", "--state", junk.to_str().unwrap(), "--part", "1"]).status.code(), Some(3));
    let table = write(dir.path(), "j.csv", "label,value\nXQ,1\n");
    assert_eq!(run(&["ingest", "--pauli", table.to_str().unwrap(), "--part", "1"]).status.code(), Some(3));

    let missing = dir.path().join("absent.json");
    let o = run(&["total", "--state", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.json"));

    let f = gen(dir.path(), "bell");
    assert_eq!(run(&["discord", "--state", f.to_str().unwrap(), "--part", "3"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--name", "ghz(1)", "--out", "x"]).status.code(), Some(2));
    assert_eq!(run(&["discord"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn generated_files_are_canonical() {
    let dir = TempDir::new().unwrap();
    let f = gen(dir.path(), "w(3)");
    let first = std::fs::read_to_string(&f).unwrap();
    let rho = geodiscord::load_state(&f).unwrap();
    let again = dir.path().join("again.json");
    geodiscord::save_state(&rho, &again).unwrap();
    assert_eq!(first, std::fs::read_to_string(&again).unwrap());

    let fam = dir.path().join("fam.json");
    let o = run(&["gen", "--name", "ghz-ghzminus", "--p", "0.5", "--out", fam.to_str().unwrap()]);
    assert!(o.status.success());
    let o = run(&["discord", "--state", fam.to_str().unwrap(), "--part", "1", "--json"]);
    assert!(json(&o)["report"]["value"].as_f64().unwrap().abs() < 1e-15);
}
