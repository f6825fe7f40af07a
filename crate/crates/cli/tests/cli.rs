use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const Z_SYSTEM: &str = "sets 3\nA1 ~ A2\nA1 ~ A3\nA1 A2 ~ A1 A3\n";
const Z_FAMILY: &str = r#"[["e"], ["a"], ["A"]]"#;

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("setcong-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_setcong"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_out(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn z_path() -> String {
    write_temp("z.txt", Z_SYSTEM).display().to_string()
}

#[test]
fn analyze_json_lists_every_node() {
    let out = run(&["analyze", &z_path(), "--json"]);
    assert!(out.status.success());
    let v = json_out(&out);
    let props = v["properties"].as_object().unwrap();
    assert_eq!(props.len(), 15);
    assert_eq!(props["FFG"]["status"], "true");
    assert_eq!(props["nc"]["status"], "true");
    assert_eq!(v["system"]["sets"], 3);
    assert_eq!(
        v["artifacts"]["open_converses"].as_array().unwrap().len(),
        5
    );
    assert!(v["checks"].as_array().is_some());
}

#[test]
fn analyze_text_names_statuses() {
    let out = run(&["analyze", &z_path()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("FFG"));
}

#[test]
fn parse_errors_exit_with_two() {
    let bad = write_temp("bad.txt", "sets 2\nA1 ~ B7\n");
    let out = run(&["analyze", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let garbled = write_temp("garbled.txt", "sets two\n");
    assert_eq!(
        run(&["analyze", garbled.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn verify_accepts_and_rejects() {
    let z = z_path();
    let ok = run(&[
        "verify",
        &z,
        "--family",
        Z_FAMILY,
        "--witness",
        "a",
        "--witness",
        "A",
        "--witness",
        "A",
    ]);
    assert!(ok.status.success());
    assert_eq!(json_out(&ok)["holds"], true);

    let bad = run(&[
        "verify",
        &z,
        "--family",
        Z_FAMILY,
        "--witness",
        "a",
        "--witness",
        "a",
        "--witness",
        "A",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    let v = json_out(&bad);
    assert_eq!(v["holds"], false);
    assert_eq!(v["statements"][1]["holds"], false);
}

#[test]
fn realize_verifies_on_the_sphere() {
    let out = run(&[
        "realize",
        &z_path(),
        "--family",
        Z_FAMILY,
        "--witness",
        "1=a",
        "--witness",
        "2=A",
        "--witness",
        "3=A",
    ]);
    assert!(out.status.success());
    assert_eq!(json_out(&out)["verified"], true);
}

#[test]
fn search_finds_the_integer_family() {
    let out = run(&[
        "search",
        &z_path(),
        "--witness",
        "a",
        "--witness",
        "A",
        "--witness",
        "A",
        "--radius",
        "1",
    ]);
    assert!(out.status.success());
    assert_eq!(json_out(&out)["result"]["outcome"], "sat");
}

#[test]
fn deduce_reports_completeness() {
    let out = run(&["deduce", &z_path(), "--depth", "2", "--sample", "5,1"]);
    assert!(out.status.success());
    let v = json_out(&out);
    assert_eq!(v["completeness"]["holds"], true);
    assert_eq!(
        v["designated_witnessing"],
        serde_json::json!([true, true, true])
    );
}

#[test]
fn setgraph_claims() {
    let out = run(&["setgraph", "--set", "e,a,aa", "--claim", "2"]);
    assert!(out.status.success());
    let v = json_out(&out);
    assert_eq!(v["claim2"], false);
    assert_eq!(v["vertices"], 6);
}

#[test]
fn bound_and_lattice() {
    let out = run(&["bound", "--m", "2", "--len", "1", "--r", "3"]);
    assert!(out.status.success());
    assert!(json_out(&out)["radius"].is_string());

    let dot = run(&["lattice", "--dot"]);
    assert!(dot.status.success());
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("->").count(), 24);
}

#[test]
fn fixtures_all_reproduce() {
    let out = run(&["fixtures", "--json"]);
    assert!(out.status.success());
    let v = json_out(&out);
    let list = v.as_array().unwrap();
    assert_eq!(list.len(), 8);
    assert!(list
        .iter()
        .all(|f| f["mismatches"].as_array().unwrap().is_empty()));
}
