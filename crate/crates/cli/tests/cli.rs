use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn mchain(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mchain")).args(args).output().unwrap()
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    mchain(&args)
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

/// The report without wall-clock timings and the echoed output directory.
fn numeric_part(out: &Path) -> Value {
    let mut r = report(out);
    r.as_object_mut().unwrap().remove("timings");
    r["config"]["output"].as_object_mut().unwrap().remove("dir");
    r
}

fn before_timings(out: &Path) -> String {
    let text = fs::read_to_string(out.join("report.json")).unwrap();
    let end = text.find("\"timings\"").unwrap();
    text[..end].to_string()
}

const TRIVIAL: &str = r#"
schema_version = 1
[model]
name = "trivial"
sites = 80
boundary = "ring"
params = { mu = 1.0 }
"#;

#[test]
fn trivial_chain_index_is_plus_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", TRIVIAL);
    let out = dir.path().join("out");
    let o = run("z2-index", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    let t = &r["points"][0]["tasks"][0];
    assert_eq!(t["status"], "ok");
    assert_eq!(t["result"]["index"], 1);
    assert_eq!(t["result"]["agreement"], true);
    assert_eq!(t["provenance"]["tolerances"]["wedge_tol"].as_f64(), Some(1e-6));
}

#[test]
fn empty_task_list_echoes_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.toml", TRIVIAL);
    let out = dir.path().join("out");
    let o = run("run", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["config"]["model"]["name"], "trivial");
    assert_eq!(r["config"]["model"]["params"]["mu"].as_f64(), Some(1.0));
    assert_eq!(r["points"][0]["tasks"].as_array().unwrap().len(), 0);
}

#[test]
fn short_series_gives_three_csv_rows() {
    let dir = tempfile::tempdir().unwrap();
    let body = format!("{TRIVIAL}\n[[tasks]]\nkind = \"string-order\"\nk_max = 2\n");
    let cfg = write_config(dir.path(), "c.toml", &body);
    let out = dir.path().join("out");
    let o = run("string-order", &cfg, &out, &["--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(out.join("task00-string-order.csv")).unwrap();
    let lines: Vec<&str> = csv.split_terminator('\n').collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "k,value");
    assert!(lines[1].starts_with("0,"));
    assert!(!csv.contains('\r'));
    assert!(!out.join("report.json").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
schema_version = 1
seed = 11
[model]
name = "xy"
sites = 8
params = { gamma = 0.5, lambda = 0.25 }
[[tasks]]
kind = "spectrum"
[[tasks]]
kind = "oracle"
probes = 20
[output]
formats = ["json", "csv"]
"#;
    let cfg = write_config(dir.path(), "c.toml", body);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(run("run", &cfg, &a, &[]).status.code(), Some(0));
    assert_eq!(run("run", &cfg, &b, &[]).status.code(), Some(0));
    assert_eq!(numeric_part(&a), numeric_part(&b));
    let first = before_timings(&a);
    let csv = fs::read(a.join("task00-spectrum.csv")).unwrap();
    assert_eq!(run("run", &cfg, &a, &[]).status.code(), Some(0));
    assert_eq!(before_timings(&a), first);
    assert_eq!(fs::read(a.join("task00-spectrum.csv")).unwrap(), csv);
    assert_eq!(
        fs::read(a.join("task00-spectrum.csv")).unwrap(),
        fs::read(b.join("task00-spectrum.csv")).unwrap()
    );
    // a different seed changes the probes
    let c = dir.path().join("c");
    assert_eq!(run("run", &cfg, &c, &["--seed", "12"]).status.code(), Some(0));
    let rc = report(&c);
    assert_eq!(rc["config"]["seed"], 12);
    let m = |r: &Value| r["points"][0]["tasks"][1]["result"]["gap_inequality"]["m_empirical"].as_f64().unwrap();
    assert_ne!(m(&rc), m(&report(&a)));
    let oracle = &report(&a)["points"][0]["tasks"][1]["result"];
    assert_eq!(oracle["jw_matrix_equal"], true);
    assert!(oracle["two_point_max_deviation"].as_f64().unwrap() < 1e-10);
}

#[test]
fn sweep_detection_matches_index() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
schema_version = 1
[model]
name = "kitaev"
sites = 200
boundary = "ring"
params = { J = 1.0, lambda = 0.0 }
[sweep]
param = "lambda"
values = [0.0, 0.25, 0.5, 0.75, 1.25, 1.5, 1.75, 2.0]
[[tasks]]
kind = "z2-index"
[[tasks]]
kind = "string-order"
k_max = 40
origin = 100
[output]
formats = ["json", "csv"]
"#;
    let cfg = write_config(dir.path(), "c.toml", body);
    let seq = dir.path().join("seq");
    let par = dir.path().join("par");
    assert_eq!(run("sweep", &cfg, &seq, &[]).status.code(), Some(0));
    assert_eq!(run("sweep", &cfg, &par, &["--threads", "2"]).status.code(), Some(0));
    assert_eq!(numeric_part(&seq), numeric_part(&par));
    let r = report(&seq);
    let points = r["points"].as_array().unwrap();
    assert_eq!(points.len(), 8);
    for p in points {
        let index = p["tasks"][0]["result"]["index"].as_i64().unwrap();
        let detected = p["tasks"][1]["result"]["detection"]["detected"].as_bool().unwrap();
        assert_eq!(detected, index == -1, "lambda {}", p["sweep_value"]);
        assert_eq!(p["tasks"][0]["result"]["agreement"], true);
    }
    assert!(seq.join("p007-task01-string-order.csv").exists());
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let unknown = write_config(dir.path(), "a.toml", &format!("{TRIVIAL}\n[tolerances]\nwedge = 1e-3\n"));
    let o = run("run", &unknown, &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("tolerances") && err.contains("wedge"), "{err}");

    let bad_param = write_config(dir.path(), "b.toml", &TRIVIAL.replace("mu = 1.0", "mu = 1.0, J = 2.0"));
    assert_eq!(run("run", &bad_param, &out, &[]).status.code(), Some(2));
    let no_sweep = write_config(dir.path(), "c.toml", TRIVIAL);
    assert_eq!(run("sweep", &no_sweep, &out, &[]).status.code(), Some(2));
    let missing = dir.path().join("missing.toml");
    assert_eq!(run("run", &missing, &out, &[]).status.code(), Some(2));
    assert!(!out.exists(), "nothing is computed or written for a bad config");
}

#[test]
fn task_failures_are_recorded_and_do_not_stop_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let body = r#"
schema_version = 1
[model]
name = "kitaev"
sites = 60
boundary = "ring"
params = { J = 1.0, lambda = 1.0 }
[[tasks]]
kind = "z2-index"
[[tasks]]
kind = "spectrum"
"#;
    let cfg = write_config(dir.path(), "c.toml", body);
    let out = dir.path().join("out");
    let o = run("run", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&out);
    let tasks = &r["points"][0]["tasks"];
    assert_eq!(tasks[0]["status"], "error");
    assert!(tasks[0]["error"].as_str().unwrap().contains("degenerate"));
    assert_eq!(tasks[1]["status"], "ok");
    assert_eq!(r["status"], "failed");
}
