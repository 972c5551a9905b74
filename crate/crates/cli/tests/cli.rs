use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "data", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn ordlam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ordlam")).args(args).output().expect("spawn ordlam")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn theta_graph_is_a_three_cycle() {
    let o = ordlam(&["graph", "Theta"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("// ordlam graph seed=42"));
    assert!(s.contains("digraph"));
    assert_eq!(s.matches("->").count(), 3);
}

#[test]
fn pi_eq_refutes_theta_omega() {
    let o = ordlam(&["pi-eq", "Theta", "Omega"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("refuted"));
}

#[test]
fn subtractive_search_on_xor() {
    let o = ordlam(&["alg-search", &data("z2xor.json"), "--subtractive", "--n", "2", "--depth", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("x⊕y"));
}

#[test]
fn usage_problems_exit_two() {
    assert_eq!(ordlam(&["reduce", "(\\x."]).status.code(), Some(2));
    assert_eq!(ordlam(&["reduce", "I", "--rules", "gamma"]).status.code(), Some(2));
    assert_eq!(ordlam(&["gamma", &data("bad-space.json")]).status.code(), Some(2));
    assert_eq!(ordlam(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(ordlam(&["reduce", "I", "--max-steps", "0"]).status.code(), Some(2));
}

#[test]
fn json_output_carries_header() {
    let o = ordlam(&["reduce", "I I", "--format", "json", "--seed", "7"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["header"]["seed"], 7);
    assert_eq!(v["header"]["command"], "reduce");
    assert_eq!(v["report"]["status"], "normal-form");
}

#[test]
fn config_file_is_read() {
    let o = ordlam(&["--config", &data("run.toml"), "reduce", "I", "--fuel", "1"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("# ordlam reduce seed=42 fuel=1 budget=10000/2000/400"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["pi-graph", "Theta"],
        vec!["suite", "--only", "1,2,10"],
        vec!["top-sweep", "--carrier", "2"],
    ] {
        let a = ordlam(&args);
        let b = ordlam(&args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn jk_transform_removes_all_links() {
    let o = ordlam(&["jk-transform", &data("swap2.json"), "--all", "--format", "json"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("\"header\""));
    let text = stdout(&ordlam(&["jk-transform", &data("swap2.json"), "--all"]));
    assert!(!text.is_empty());
}

#[test]
fn top_check_discrete_and_sierpinski() {
    let o = ordlam(&["top-check", &data("z2xor.json"), &data("discrete2.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("FAIL"));
    let o = ordlam(&["top-check", &data("z2xor.json"), &data("sierpinski.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n/a"));
}

#[test]
fn gamma_on_sierpinski() {
    let o = ordlam(&["gamma", &data("sierpinski.json"), "--point", "1"]);
    assert!(o.status.success());
    let o = ordlam(&["gamma", &data("sierpinski.json"), "--point", "5"]);
    assert_eq!(o.status.code(), Some(2));
}
