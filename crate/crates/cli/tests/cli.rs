use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cellres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellres")).args(args).env_remove("CELLRES_JOBS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn save(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = cellres(args);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.join(name);
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_pentagon_and_hexagon() {
    let dir = TempDir::new().unwrap();
    let pent = save(dir.path(), "pentagon.json", &["construct", "polygon", "--n", "5"]);
    let fam = save(dir.path(), "family.json", &["construct", "polygon-family", "--n", "5"]);
    let out = cellres(&["verify", "--complex", s(&pent), "--family", s(&fam)]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["result"]["is_cm"], true);
    assert_eq!(report["field"], "gf2");
    assert_eq!(report["inputs"]["complex"]["sha256"].as_str().unwrap().len(), 64);

    // any family on the hexagon fails
    let hex = save(dir.path(), "hexagon.json", &["construct", "polygon", "--n", "6"]);
    let strings = dir.path().join("strings.json");
    std::fs::write(&strings, r#"{"n": 6, "sets": [[0,1],[1,2],[2,3],[3,4],[4,5],[5,0]]}"#).unwrap();
    let out = cellres(&["verify", "--complex", s(&hex), "--family", s(&strings), "--field", "rational"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["field"], "rational");
}

#[test]
fn chord_families_have_six_members() {
    let report = json(&cellres(&["construct", "chord-families", "--n", "5", "--a", "2"]));
    let fams = report["result"]["families"].as_array().unwrap();
    assert_eq!(fams.len(), 2);
    assert!(fams.iter().all(|f| f["sets"].as_array().unwrap().len() == 6));
}

#[test]
fn enumerate_and_guard() {
    let dir = TempDir::new().unwrap();
    let chord = save(dir.path(), "chord.json", &["construct", "chord", "--n", "6", "--a", "2"]);
    let out = cellres(&["enumerate", "--complex", s(&chord), "--maximal"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["count"], 2);
    let out = cellres(&["enumerate", "--complex", s(&chord), "--maximal", "--symmetry", "dihedral", "--jobs", "2"]);
    assert_eq!(json(&out)["result"]["count"], 1);

    let out = cellres(&["enumerate", "--complex", s(&chord), "--max-candidates", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "guard");
}

#[test]
fn maximal_check_exit_codes() {
    let dir = TempDir::new().unwrap();
    let fx = save(dir.path(), "fixture.json", &["construct", "fixture", "--id", "3.2"]);
    let report = json(&cellres(&["construct", "fixture", "--id", "3.2"]));
    let complex = dir.path().join("hexagon.json");
    std::fs::write(&complex, report["result"]["complex"].to_string()).unwrap();
    let pent = save(dir.path(), "pentagon.json", &["construct", "polygon", "--n", "5"]);
    let fam = save(dir.path(), "family.json", &["construct", "polygon-family", "--n", "5"]);
    assert_eq!(cellres(&["maximal-check", "--complex", s(&pent), "--family", s(&fam)]).status.code(), Some(0));
    // the fixture file is not a family: malformed input
    assert_eq!(cellres(&["maximal-check", "--complex", s(&complex), "--family", s(&fx)]).status.code(), Some(3));
}

#[test]
fn homology_betti_polarize_morphism() {
    let dir = TempDir::new().unwrap();
    let pent = save(dir.path(), "pentagon.json", &["construct", "polygon", "--n", "5"]);
    let h = json(&cellres(&["homology", "--complex", s(&pent), "--subset", "0,2"]));
    assert_eq!(h["result"]["homology"]["reduced_betti"]["0"], 1);

    let fam = save(dir.path(), "family.json", &["construct", "polygon-family", "--n", "5"]);
    let b = json(&cellres(&["betti", "--complex", s(&pent), "--family", s(&fam)]));
    assert_eq!(b["result"]["ranks"], serde_json::json!([1, 5, 5, 1]));

    let lab = dir.path().join("labelling.json");
    std::fs::write(&lab, r#"{"n_variables": 2, "labels": [[2,0],[1,1],[0,2]]}"#).unwrap();
    let p = json(&cellres(&["polarize", "--labelling", s(&lab)]));
    assert_eq!(p["result"]["labelling"]["n_variables"], 4);

    let fine = dir.path().join("fine.json");
    let coarse = dir.path().join("coarse.json");
    std::fs::write(&fine, r#"{"n": 2, "sets": [[0],[1]]}"#).unwrap();
    std::fs::write(&coarse, r#"{"n": 2, "sets": [[0,1]]}"#).unwrap();
    let out = cellres(&["morphism", "--from", s(&fine), "--to", s(&coarse)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["refinement"], "greater");
    assert_eq!(cellres(&["morphism", "--from", s(&coarse), "--to", s(&fine)]).status.code(), Some(1));
}

#[test]
fn construct_list_and_out_dir() {
    let dir = TempDir::new().unwrap();
    let out = cellres(&["construct", "--list", "--out-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let list = json(&out)["result"]["fixtures"].as_array().unwrap().len();
    assert_eq!(list, std::fs::read_dir(dir.path()).unwrap().count());
}

#[test]
fn output_is_byte_stable() {
    let a = cellres(&["construct", "fixture", "--id", "4.4"]);
    let b = cellres(&["construct", "fixture", "--id", "4.4"]);
    assert_eq!(a.stdout, b.stdout);
    assert!(json(&a).get("wall_time_s").is_none());
    let t = json(&cellres(&["construct", "wheel", "--n", "4", "--timing"]));
    assert!(t["wall_time_s"].is_number());
}

#[test]
fn malformed_input_exit_three() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{not json").unwrap();
    let out = cellres(&["homology", "--complex", s(&bad)]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
    assert_eq!(cellres(&["conjecture", "9.9"]).status.code(), Some(3));
}

#[test]
fn conjecture_small_run() {
    let out = cellres(&["conjecture", "3.10", "--max-n", "5", "--max-chords", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["result"]["counterexamples"].as_array().unwrap().len(), 0);
}
