use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scratch(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    fs::write(&p, contents).unwrap();
    p
}

fn tropmu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropmu"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    })
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect()
}

const K4: &str = r#"{"name":"K4","type":"graphic","vertices":4,
    "edges":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;
const FANO: &str = r#"{"name":"Fano","type":"linear","field":"GF(2)",
    "matrix":[[1,0,0,1,1,0,1],[0,1,0,1,0,1,1],[0,0,1,0,1,1,1]]}"#;

#[test]
fn charpoly_of_k4_and_free() {
    let f = scratch("k4.json", K4);
    let out = tropmu(&["charpoly", f.to_str().unwrap()]);
    assert!(out.status.success());
    let j = json_of(&out);
    assert_eq!(strings(&j["mu"]), ["1", "5", "6"]);
    assert_eq!(strings(&j["char_poly"]), ["1", "-6", "11", "-6"]);

    let f = scratch("free4.json", r#"{"name":"free","type":"free","size":5}"#);
    let j = json_of(&tropmu(&["charpoly", f.to_str().unwrap()]));
    assert_eq!(strings(&j["mu"]), ["1", "4", "6", "4", "1"]);
}

#[test]
fn loops_are_dropped_and_reported() {
    let f = scratch(
        "loopy.json",
        r#"{"name":"tri","type":"graphic","vertices":3,"edges":[[0,1],[1,1],[1,2],[0,2]]}"#,
    );
    let out = tropmu(&["charpoly", f.to_str().unwrap()]);
    assert!(out.status.success());
    let j = json_of(&out);
    assert_eq!(j["simplification"]["loops"], serde_json::json!([1]));
    assert_eq!(strings(&j["mu"]), ["1", "2"]);
}

#[test]
fn check_fano_passes() {
    let f = scratch("fano.json", FANO);
    let out = tropmu(&["check", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    assert_eq!(j["passed"], true);
    assert_eq!(j["agreement"], true);
    for m in j["methods"].as_array().unwrap() {
        assert_eq!(strings(&m["mu"]), ["1", "6", "8"], "{}", m["method"]);
    }
}

#[test]
fn check_is_deterministic() {
    let f = scratch("k4-det.json", K4);
    let a = tropmu(&["check", f.to_str().unwrap(), "--seed", "9", "--perturbations", "2"]);
    let b = tropmu(&["check", f.to_str().unwrap(), "--seed", "9", "--perturbations", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn skip_displacement() {
    let f = scratch("u23.json", r#"{"name":"U23","type":"uniform","rank":2,"size":3}"#);
    let out = tropmu(&["check", f.to_str().unwrap(), "--skip", "displacement"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json_of(&out);
    let disp = j["methods"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["method"] == "displacement")
        .unwrap();
    assert_eq!(disp["status"], "skipped");
    assert_eq!(strings(&j["char_poly"]["mu"]), ["1", "2"]);
}

#[test]
fn mu_with_trace() {
    let f = scratch("k4-mu.json", K4);
    let trace = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("k4.ndjson");
    let out = tropmu(&[
        "mu",
        f.to_str().unwrap(),
        "--method",
        "displacement",
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(strings(&json_of(&out)["mu"]["displacement"]), ["1", "5", "6"]);
    // one line per descending flag: 1 + 5 + 6
    let lines: Vec<Value> = fs::read_to_string(&trace)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 12);
    assert!(lines.iter().all(|l| l["term"]["index"] == "1"));
}

#[test]
fn fan_export_counts() {
    let cases = [
        ("u23-fan", r#"{"name":"U23","type":"uniform","rank":2,"size":3}"#, 3),
        ("free2-fan", r#"{"name":"Free(2)","type":"free","size":3}"#, 6),
        ("fano-fan", FANO, 21),
    ];
    for (stem, text, maximal) in cases {
        let f = scratch(&format!("{stem}.json"), text);
        let dest = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(format!("{stem}.out.json"));
        let out = tropmu(&["fan", f.to_str().unwrap(), "--out", dest.to_str().unwrap()]);
        assert!(out.status.success());
        assert_eq!(json_of(&out)["maximal_cones"], maximal);
        let written: tropmu::fan::WeightJson =
            serde_json::from_str(&fs::read_to_string(&dest).unwrap()).unwrap();
        assert_eq!(written.cones.len(), maximal);
        let w = tropmu::fan::MinkowskiWeight::from_json(&written).unwrap();
        assert!(tropmu::fan::check_balancing(&w).is_empty());
    }
}

#[test]
fn bad_input_exits_with_2() {
    let f = scratch("bad-rank.json", r#"{"name":"x","type":"rank_table","n":1,"ranks":[0,1,1,0]}"#);
    let out = tropmu(&["charpoly", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("witness"));

    let f = scratch("bad-schema.json", r#"{"name":"x","type":"nope"}"#);
    assert_eq!(tropmu(&["check", f.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(tropmu(&["charpoly", "/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn corpus_all_agree() {
    let out = tropmu(&["corpus", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_of(&out);
    let reports = reports.as_array().unwrap();
    assert_eq!(reports.len(), 28);
    assert!(reports.iter().all(|r| r["agreement"] == true && r["passed"] == true));
    let k5 = reports.iter().find(|r| r["name"] == "K5").unwrap();
    assert_eq!(strings(&k5["char_poly"]["mu"]), ["1", "9", "26", "24"]);
}
