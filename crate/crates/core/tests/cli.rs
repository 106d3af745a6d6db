use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hasse-forms"))
}

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, stdout, stderr) = run(args);
    assert_eq!(code, 0, "{stderr}");
    serde_json::from_str(&stdout).unwrap()
}

#[test]
fn curve_report_of_singular_cubic() {
    let v = json(&["curve", "--q", "5", "--a", "2", "--b", "3"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["total"], 7);
    assert_eq!(v["affine"], 6);
    assert_eq!(v["smooth"], false);
    assert_eq!(v["singular_points"], serde_json::json!(["(4,0)"]));
    assert!(v.get("pic_order").is_none());
    let v = json(&["curve", "--q", "5", "--a", "1", "--b", "1"]);
    assert_eq!(v["pic_order"], 9);
    assert_eq!(v["pic_parity"], "odd");
    assert_eq!(v["two_torsion"], false);
}

#[test]
fn hasse_subcommand() {
    assert_eq!(
        json(&["hasse", "--polyline", "--q", "5", "--rank", "4"])["verdict"],
        "Holds"
    );
    let v = json(&["hasse", "--q", "5", "--a", "1", "--b", "1", "--rank", "2"]);
    assert_eq!(v["verdict"], "Fails");
    assert_eq!(v["reason"]["ufd"], false);
    let (code, _, err) = run(&["hasse", "--q", "5", "--a", "2", "--b", "3", "--rank", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("singular"), "{err}");
}

#[test]
fn genus_verify_from_files() {
    let v = json(&["genus-verify", "--input", &fixture("line_f5_genus.json")]);
    assert_eq!(v["verdict"], "Certified");
    assert_eq!(v["inspection_degree"], 3);
    let v = json(&["genus-verify", "--input", &fixture("elliptic_f5_genus.json")]);
    assert_eq!(v["verdict"], "GapFound");
    let gaps: Vec<&str> = v["uncovered"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p["point"].as_str().unwrap())
        .collect();
    assert_eq!(gaps, ["(4,0)"]);
    let witnesses = v["witnesses"].as_array().unwrap();
    assert!(witnesses.iter().all(|w| w["identity_ok"] == true));
    let v = json(&[
        "genus-verify",
        "--input",
        &fixture("line_f5_genus.json"),
        "--inspection-degree",
        "1",
    ]);
    assert_eq!(v["inspection_degree"], 1);
}

#[test]
fn isom_search_from_inline_json() {
    let doc = r#"{"schema":1,"curve":{"field":{"p":7},"kind":"polyline"},
        "F":[["1","0"],["0","3"]],"G":[["3","0"],["0","1"]]}"#;
    let v = json(&["isom-search", "--input", doc, "--degree-bound", "0"]);
    assert_eq!(v["verdict"], "Found");
    assert_eq!(v["bounds"]["deg_x"], 0);
    assert!(v["Q"].is_array());
    let v = json(&["isom-search", "--input", &fixture("line_f5_search.json")]);
    assert_eq!(v["verdict"], "NoneWithinBounds");
    assert!(v["note"].as_str().unwrap().contains("not a proof"));
}

#[test]
fn budget_env_var() {
    let out = bin()
        .args(["isom-search", "--input", &fixture("elliptic_f5_search.json")])
        .env("HASSE_FORMS_BUDGET", "1000")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
    let out = bin()
        .args(["isom-search", "--input", &fixture("line_f5_search.json")])
        .env("HASSE_FORMS_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn form_subcommand() {
    let doc = r#"{"curve":{"field":{"p":5},"kind":"weierstrass","a":2,"b":3},
        "F":[["1","0"],["0","1"]],"G":[["0","2"],["2","3*y^2"]]}"#;
    let v = json(&["form", "--input", doc, "--inspection-degree", "1"]);
    assert_eq!(v["unimodular"], true);
    assert_eq!(v["rank"], 2);
    let places = v["places"].as_array().unwrap();
    assert_eq!(places.len(), 6);
    for p in places {
        if p["place"] == "(4,0)" {
            assert_eq!(p["status"], "singular");
        } else {
            assert_eq!(p["isomorphic_to_g"], true);
        }
    }
}

#[test]
fn verify_paper_passes_and_is_deterministic() {
    let (code, first, _) = run(&["verify-paper"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 12);
    let (_, second, _) = run(&["verify-paper"]);
    assert_eq!(first, second);
    let (code, text, _) = run(&["verify-paper", "--format", "text"]);
    assert_eq!(code, 0);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 12);
}

#[test]
fn outputs_are_byte_identical() {
    for args in [
        &["curve", "--q", "7", "--a", "3", "--b", "2"][..],
        &["genus-verify", "--input", &fixture("elliptic_f5_genus.json")][..],
        &[
            "--format", "text", "hasse", "--q", "9", "--a", "0,1", "--b", "1", "--rank", "3",
        ][..],
    ] {
        assert_eq!(run(args), run(args));
    }
}

#[test]
fn malformed_inputs() {
    assert_eq!(run(&["genus-verify", "--input", "/nonexistent/file.json"]).0, 2);
    assert_eq!(run(&["genus-verify", "--input", "{not json"]).0, 2);
    let doc = r#"{"curve":{"field":{"p":5},"kind":"polyline"},"F":[["1","0"],["0","1"]],
        "G":[["1","0"],["0","1"]],"witnesses":[{"Q":[["1/x","0"],["0","1"]],"s":"x+1"}]}"#;
    let (code, _, err) = run(&["genus-verify", "--input", doc]);
    assert_eq!(code, 2);
    assert!(err.contains("malformed"), "{err}");
    assert_eq!(run(&["curve", "--q", "5", "--polyline", "--a", "1"]).0, 2);
}
