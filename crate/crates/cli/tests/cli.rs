use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn osclat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osclat"))
        .args(args)
        .env_remove("OSCLAT_DISCRIMINANT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn lines(o: &Output) -> Vec<Value> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

fn write(dir: &TempDir, name: &str, doc: &Value) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, doc.to_string()).unwrap();
    p
}

fn quarter(xi: [&str; 2]) -> Value {
    json!({"kind": "standard", "r": 2, "lambda": "pi/2", "x": "0", "y": "1", "xi": xi, "z0": "0"})
}

fn path(p: &PathBuf) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_standard() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.json", &quarter(["1/2", "0"]));
    let out = osclat(&["classify", path(&f)]);
    assert!(out.status.success());
    let v = &lines(&out)[0];
    assert_eq!(v["r"], 2);
    assert_eq!(v["lambda"], json!({"base": "pi/2", "k": 0}));
    assert_eq!(v["xi0"], json!(["0", "1/2"]));
    assert!(v.get("trace").is_none());
}

#[test]
fn classify_trace() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "a.json", &quarter(["1/2", "0"]));
    let out = osclat(&["classify", "--trace", path(&f)]);
    let v = &lines(&out)[0];
    assert_eq!(v["trace"]["t0"], "1");
    assert_eq!(v["trace"]["S"], json!([["1", "0"], ["0", "1"]]));
    assert_eq!(v["trace"]["flip"], false);
}

#[test]
fn classify_generators() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "kind": "generators", "form_scale": "1", "lambda": "pi/4", "x": "0", "y": "1",
        "generators": [["1","0","0","0"], ["0","1","0","0"], ["0","0","1","0"], ["5","0","1/2","2"]],
    });
    let f = write(&dir, "g.json", &doc);
    let out = osclat(&["classify", "--trace", path(&f)]);
    assert!(out.status.success());
    let v = &lines(&out)[0];
    assert_eq!(v["r"], 2);
    assert_eq!(v["lambda"]["base"], "pi/2");
    assert_eq!(v["xi0"], json!(["0", "1/2"]));
    assert_eq!(v["trace"]["t0"], "2");
}

#[test]
fn classify_output_round_trips() {
    let dir = TempDir::new().unwrap();
    let doc = json!({
        "kind": "standard", "r": 6, "lambda": "2pi/3", "x": "-1/2", "y": "1/2*sqrt(3)",
        "xi": ["1/3", "1/6"], "z0": "7/5",
    });
    let f = write(&dir, "a.json", &doc);
    let first = stdout(&osclat(&["classify", path(&f)]));
    let v: Value = serde_json::from_str(first.trim()).unwrap();
    let lambda = match v["lambda"]["k"].as_u64().unwrap() {
        0 => v["lambda"]["base"].as_str().unwrap().to_string(),
        k => format!("{}+{k}pi", v["lambda"]["base"].as_str().unwrap()),
    };
    let again = json!({
        "kind": "standard", "r": v["r"], "lambda": lambda, "x": v["x"], "y": v["y"],
        "xi": v["xi0"],
    });
    let g = write(&dir, "b.json", &again);
    assert_eq!(stdout(&osclat(&["classify", path(&g)])), first);
    // byte-stable across runs
    assert_eq!(stdout(&osclat(&["classify", path(&f)])), first);
}

#[test]
fn malformed_scalar_exits_2() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "bad.json", &quarter(["1/0", "0"]));
    let out = osclat(&["classify", path(&f)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("xi[0]"));
}

#[test]
fn invalid_json_exits_2() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("x.json");
    std::fs::write(&p, "{\"kind\": \"standard\", \"r\": ").unwrap();
    assert_eq!(osclat(&["classify", path(&p)]).status.code(), Some(2));
    assert_eq!(
        osclat(&["classify", "/nonexistent/file.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn non_lattice_exits_3() {
    let dir = TempDir::new().unwrap();
    // (1/3, 0) violates the lattice condition at the quarter turn
    let f = write(&dir, "a.json", &quarter(["1/3", "0"]));
    assert_eq!(osclat(&["classify", path(&f)]).status.code(), Some(3));
    let mut doc = quarter(["0", "0"]);
    doc["lambda"] = json!("pi/4");
    let g = write(&dir, "b.json", &doc);
    let out = osclat(&["classify", path(&g)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("trace constraint"));
}

#[test]
fn compare_verdicts() {
    let dir = TempDir::new().unwrap();
    let a = write(&dir, "a.json", &quarter(["0", "0"]));
    let b = write(&dir, "b.json", &quarter(["0", "1/2"]));
    let c = write(&dir, "c.json", &quarter(["1/2", "0"]));

    let out = osclat(&["compare", path(&a), path(&a)]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("equivalent"));

    let out = osclat(&["compare", path(&a), path(&b)]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut it = text.lines();
    assert_eq!(it.next(), Some("inequivalent"));
    assert_eq!(it.count(), 2);

    let out = osclat(&["compare", path(&c), path(&b)]);
    assert_eq!(stdout(&out).lines().next(), Some("equivalent"));
}

#[test]
fn table_rows() {
    let out = osclat(&[
        "table",
        "--lambda",
        "pi/3",
        "--x",
        "1/2",
        "--y",
        "1/2*sqrt(3)",
        "--r",
        "3",
    ]);
    assert!(out.status.success());
    let reps: Vec<Value> = lines(&out).iter().map(|v| v["xi0"].clone()).collect();
    assert_eq!(reps, vec![json!(["1/6", "0"])]);

    let out = osclat(&[
        "table", "--lambda", "2pi", "--x", "0", "--y", "1", "--r", "2",
    ]);
    let reps: Vec<Value> = lines(&out).iter().map(|v| v["xi0"].clone()).collect();
    assert_eq!(
        reps,
        vec![
            json!(["0", "0"]),
            json!(["0", "1/2"]),
            json!(["1/2", "1/2"])
        ]
    );
    // the r² = 4 admissible points split among the classes
    let total: u64 = lines(&out)
        .iter()
        .map(|v| v["class_size"].as_u64().unwrap())
        .sum();
    assert_eq!(total, 4);
}

#[test]
fn table_incompatible_point_exits_3() {
    let out = osclat(&[
        "table",
        "--lambda",
        "pi/2",
        "--x",
        "1/2",
        "--y",
        "1/2*sqrt(3)",
        "--r",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("requires the point"));
}

#[test]
fn orbits_partition() {
    let out = osclat(&[
        "orbits", "--lambda", "pi/2", "--x", "0", "--y", "1", "--r", "2",
    ]);
    assert!(out.status.success());
    let v = lines(&out);
    assert_eq!(v.len(), 2);
    assert_eq!(v[0]["members"], json!([["0", "0"], ["1/2", "1/2"]]));
    assert_eq!(v[1]["members"], json!([["0", "1/2"], ["1/2", "0"]]));
}

#[test]
fn discriminant_override() {
    let run = |d: &str| {
        Command::new(env!("CARGO_BIN_EXE_osclat"))
            .args([
                "table",
                "--lambda",
                "pi/3",
                "--x",
                "1/2",
                "--y",
                "1/2*sqrt(3)",
                "--r",
                "1",
            ])
            .env("OSCLAT_DISCRIMINANT", d)
            .output()
            .unwrap()
    };
    assert!(run("3").status.success());
    assert_eq!(run("5").status.code(), Some(2));
    assert_eq!(run("4").status.code(), Some(2));
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let out = osclat(&["verify", "--r-max", "4"]);
    assert!(out.status.success(), "{}", stdout(&out));
    let v = lines(&out);
    assert!(v.iter().all(|c| c["passed"] == true));
    assert!(v[0]["count"].as_u64().unwrap() >= 28);

    let out = osclat(&["verify", "--r-max", "4", "--corrupt-table"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(lines(&out)[0]["passed"], false);
}

#[test]
fn verify_r_max_one() {
    let out = osclat(&["verify", "--r-max", "1"]);
    assert!(out.status.success(), "{}", stdout(&out));
}
