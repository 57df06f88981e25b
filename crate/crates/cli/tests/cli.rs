use std::fs;
use std::process::{Command, Output};

fn divpow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divpow")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn tau_products() {
    let o = divpow(&["tau", "[x^(1)|lim]", "[x^(1)|lim]"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "[xx^(1)|lim] + 2*[x^(2)|lim]\n");
    let o = divpow(&["tau", "[|n=2]", "[x^(1)|n=2]"]);
    assert_eq!(stdout(&o), "[x^(1)|n=2]\n");
    let o = divpow(&["tau", "[x^(1)|lim]", "[y^(1)|lim]", "--n", "1"]);
    assert_eq!(stdout(&o), "[xy^(1)|n=1]\n");
}

#[test]
fn malformed_input_points_at_the_error() {
    let o = divpow(&["tau", "[x^(1)|lim", "[x^(1)|lim]"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("[x^(1)|lim\n"), "{err}");
    assert!(err.contains("          ^"), "{err}");
}

#[test]
fn pi_values() {
    let o = divpow(&["pi", "[x^(1)|n=2]"]);
    assert_eq!(stdout(&o), "x[x][1][1] + x[x][2][2]\n");
    let o = divpow(&["pi", "[x^(2)|n=2]"]);
    assert_eq!(stdout(&o), "-x[x][1][2]*x[x][2][1] + x[x][1][1]*x[x][2][2]\n");
    assert!(!divpow(&["pi", "[x^(2)|n=2]", "--n", "3"]).status.success());
    assert!(!divpow(&["pi", "[x^(1)|lim]"]).status.success());
}

#[test]
fn verify_writes_a_passing_report() {
    let dir = std::env::temp_dir().join(format!("divpow-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let o = divpow(&[
        "verify", "--thm", "graded-iso", "--n", "2", "--letters", "2", "--maxdeg", "3",
        "--out", out.to_str().unwrap(), "--workers", "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let entries = report.as_array().unwrap();
    assert_eq!(entries.len(), 2 + 3 + 4);
    assert!(entries.iter().all(|e| e["pass"] == true && e["theorem"] == "graded-iso"));
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_ranges_and_empty_runs() {
    let o = divpow(&["verify", "--thm", "ch", "--n", "1..3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let entries: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(entries.as_array().unwrap().len(), 3 * 4);

    let o = divpow(&["verify", "--maxdeg", "0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "[]");

    assert!(!divpow(&["verify", "--thm", "2.2.2"]).status.success());
}

#[test]
fn verify_output_does_not_depend_on_workers() {
    let run = |w: &str| stdout(&divpow(&["verify", "--n", "1,2", "--maxdeg", "3", "--seed", "9", "--workers", w]));
    assert_eq!(run("1"), run("8"));
}

#[test]
fn universal_ring_json() {
    let dir = std::env::temp_dir().join(format!("divpow-universal-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let file = dir.join("p.json");
    fs::write(&file, r#"{"generators": ["x"], "relations": ["x^2"]}"#).unwrap();
    let o = divpow(&["universal", file.to_str().unwrap(), "--n", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["ideal"], serde_json::json!(["x[x][1][1]^2"]));
    assert_eq!(doc["images"]["x"], serde_json::json!([["x[x][1][1]"]]));

    fs::write(&file, "{not json").unwrap();
    assert!(!divpow(&["universal", file.to_str().unwrap(), "--n", "1"]).status.success());
    fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn symmetric_function_bases() {
    assert_eq!(stdout(&divpow(&["sym", "e[2,1]@3", "--to", "m"])), "3*m[1,1,1] + m[2,1]\n");
    assert_eq!(stdout(&divpow(&["sym", "m[2,1]@3", "--to", "e"])), "e[2,1] - 3*e[3]\n");
}
