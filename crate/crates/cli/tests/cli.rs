use std::path::PathBuf;
use std::process::{Command, Output};

fn dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("qgauss-cli-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qgauss"));
    c.args(args).current_dir(dir());
    for k in ["QGAUSS_MAX_STEPS", "QGAUSS_MAX_DEGREE", "QGAUSS_MAX_WORDS", "QGAUSS_CONFIG"] {
        c.env_remove(k);
    }
    for (k, v) in env {
        c.env(k, v);
    }
    c.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const HARD: &str = "t[3,3]*t[2,2]*t[1,1]";

fn config(name: &str, text: &str) -> String {
    let p = dir().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_then_env_then_flag() {
    let cfg = config("tight.toml", "max-steps = 3\n");
    assert_eq!(run(&["--config", &cfg, "normal-form", "glq3", HARD], &[]).status.code(), Some(3));
    let ok = run(&["--config", &cfg, "normal-form", "glq3", HARD], &[("QGAUSS_MAX_STEPS", "100000")]);
    assert_eq!(ok.status.code(), Some(0));
    let env_tight = run(&["normal-form", "glq3", HARD], &[("QGAUSS_MAX_STEPS", "3")]);
    assert_eq!(env_tight.status.code(), Some(3));
    let flag_wins = run(&["--max-steps", "100000", "normal-form", "glq3", HARD], &[("QGAUSS_MAX_STEPS", "3")]);
    assert_eq!(flag_wins.status.code(), Some(0));
    assert_eq!(stdout(&flag_wins), stdout(&ok));
}

#[test]
fn config_from_env_and_format_key() {
    let cfg = config("json.toml", "format = \"json\"\nsequential = true\n");
    let o = run(&["relations", "glq2"], &[("QGAUSS_CONFIG", &cfg)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 6);
    let text = run(&["--format", "text", "relations", "glq2"], &[("QGAUSS_CONFIG", &cfg)]);
    assert!(stdout(&text).contains("a*d - d*a = lambda*b*c"));
}

#[test]
fn bad_config_is_a_usage_error() {
    let cfg = config("bad.toml", "max-stepz = 3\n");
    let o = run(&["--config", &cfg, "preset", "list"], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
    let missing = run(&["--config", "/nonexistent/q.toml", "preset", "list"], &[]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn sequential_mode_prints_the_same() {
    let a = run(&["check", "glq21", "--format", "json"], &[]);
    let b = run(&["--sequential", "check", "glq21", "--format", "json"], &[]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn preset_commands() {
    let list = stdout(&run(&["preset", "list"], &[]));
    for name in ["glq2", "soq3", "spq2", "glq11", "glq21", "ospq12"] {
        assert!(list.contains(name));
    }
    let show = run(&["preset", "show", "soq3"], &[]);
    assert!(stdout(&show).contains("\"minor_kind\""));
    assert_eq!(run(&["preset", "show", "nosuch"], &[]).status.code(), Some(2));
}

#[test]
fn normal_form_outputs() {
    assert_eq!(stdout(&run(&["normal-form", "glq2", "d*a"], &[])).trim(), "a*d - lambda*b*c");
    assert_eq!(stdout(&run(&["normal-form", "glq11", "beta*gamma + gamma*beta"], &[])).trim(), "0");
    let bad = run(&["normal-form", "glq2", "x)"], &[]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains('^'));
    let at = run(&["normal-form", "glq2", "q*a", "--at-q", "2", "--format", "json"], &[]);
    let v: serde_json::Value = serde_json::from_slice(&at.stdout).unwrap();
    assert_eq!(v["at_s"]["value"], "4*a");
    assert_eq!(run(&["normal-form", "glq2", "a", "--at-q", "x"], &[]).status.code(), Some(2));
}

#[test]
fn rmatrix_validate() {
    let good = dir().join("glq2.rmatrix.json");
    std::fs::write(&good, qgauss::rmatrix::RMatrix::build_glq(2).to_json_string()).unwrap();
    let o = run(&["rmatrix", "validate", good.to_str().unwrap(), "--format", "json"], &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["yang_baxter"], true);
    let junk = dir().join("junk.json");
    std::fs::write(&junk, "{\"dimension\": 2}").unwrap();
    assert_eq!(run(&["rmatrix", "validate", junk.to_str().unwrap()], &[]).status.code(), Some(2));
}

#[test]
fn decompose_emits() {
    let f = run(&["decompose", "soq3", "--emit", "factors", "--format", "json"], &[]);
    let v: serde_json::Value = serde_json::from_slice(&f.stdout).unwrap();
    assert!(v.get("factors").is_some() && v.get("relations").is_none());
    let r = run(&["decompose", "spq2", "--emit", "relations", "--format", "json"], &[]);
    let v: serde_json::Value = serde_json::from_slice(&r.stdout).unwrap();
    assert!(v.get("factors").is_none());
    assert_eq!(v["independent_generators"], 10);
}
