use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_graphbrauer");

fn graphbrauer(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("graphbrauer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn emitted_example_analyzes_like_the_builtin() {
    let path = scratch("doubled-k4.json");
    let emit = graphbrauer(&["examples", "emit", "doubled-k4", path.to_str().unwrap()]);
    assert!(emit.status.success(), "{}", stderr(&emit));

    let from_file = graphbrauer(&["analyze", path.to_str().unwrap(), "--json"]);
    let from_builtin = graphbrauer(&["analyze", "--builtin", "doubled-k4", "--json"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&from_builtin));
    let v: serde_json::Value = serde_json::from_str(&stdout(&from_file)).unwrap();
    assert_eq!(v["period"]["lower"], 2);
    assert_eq!(v["index"]["upper"], 2);
    assert_eq!(v["aut_order"], "128");
}

#[test]
fn text_and_json_agree() {
    let text = stdout(&graphbrauer(&["analyze", "--builtin", "k5"]));
    let json = stdout(&graphbrauer(&["analyze", "--builtin", "k5", "--json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert!(text.contains("period  5 (resolved)"), "{text}");
    assert!(text.contains(&format!("|Aut|   {}", v["aut_order"].as_str().unwrap())));
    let listed = text.lines().skip_while(|l| *l != "certificates").skip(1).take_while(|l| l.starts_with("  ")).count();
    assert_eq!(listed, v["certificates"].as_array().unwrap().len());
}

#[test]
fn input_errors_exit_one() {
    let missing = graphbrauer(&["analyze", "/nonexistent/graph.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(stderr(&missing).contains("file not found"));

    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"name\": \"x\"").unwrap();
    assert_eq!(graphbrauer(&["analyze", bad.to_str().unwrap()]).status.code(), Some(1));

    // every vertex has degree 2
    let cycle = scratch("cycle.json");
    std::fs::write(
        &cycle,
        r#"{"name":"c3","vertices":["a","b","c"],"edges":[
            {"id":"x","ends":["a","b"]},{"id":"y","ends":["b","c"]},{"id":"z","ends":["c","a"]}]}"#,
    )
    .unwrap();
    let low = graphbrauer(&["analyze", cycle.to_str().unwrap()]);
    assert_eq!(low.status.code(), Some(1), "{}", stdout(&low));

    assert_eq!(graphbrauer(&["analyze", "--builtin", "k5", "--max-enum", "0"]).status.code(), Some(1));
    assert_eq!(graphbrauer(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn exhausted_caps_exit_two() {
    let path = data("four-vertex.json");
    let path = path.to_str().unwrap();
    let ok = graphbrauer(&["analyze", path]);
    assert_eq!(ok.status.code(), Some(0), "{}", stderr(&ok));

    let capped = graphbrauer(&[
        "analyze",
        path,
        "--max-enum",
        "1",
        "--bar-cap",
        "1",
        "--union-cap",
        "1",
        "--subgraph-depth",
        "0",
    ]);
    assert_eq!(capped.status.code(), Some(2));
    let err = stderr(&capped);
    assert!(err.contains("no bound"), "{err}");
    assert!(err.contains("bar cap 1"), "{err}");
    assert!(stdout(&capped).is_empty());
}

#[test]
fn oracle_seed_seven_passes() {
    let o = graphbrauer(&["oracle", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let out = stdout(&o);
    assert!(out.lines().count() >= 7);
    assert!(out.lines().all(|l| l.starts_with("PASS ")), "{out}");
}

#[test]
fn examples_list_names_every_family() {
    let o = graphbrauer(&["examples", "list"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for name in ["doubled-cycle-g3", "k5", "doubled-k4", "hybrid", "k34", "soccer-doubled"] {
        assert!(out.contains(name), "{name} missing from\n{out}");
    }
}
