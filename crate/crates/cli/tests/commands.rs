use std::path::Path;
use std::process::{Command, Output};

use plsol::fixtures::{g2, x0};
use plsol::PLMap;
use serde_json::Value;

fn plsol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plsol"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn solve_exit_codes() {
    let out = plsol(&["solve", "x0", "x1"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["verdict"], "not-soluble");
    assert_eq!(v["witness"]["kind"], "bad-overlap");
    assert_eq!(v["witness"]["first"]["orbital"]["right"], "1");
    assert_eq!(v["witness"]["second"]["orbital"]["right"], "1");

    let out = plsol(&["solve"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["derived_length"], 0);
}

#[test]
fn solve_with_trace_and_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let g2_json = serde_json::to_string(&g2()).unwrap();
    let path = write(dir.path(), "g2.json", &g2_json);
    let out = plsol(&["solve", "--trace", "x0", &path]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["derived_length"], 2);
    let events = v["trace"].as_array().unwrap();
    assert_eq!(events.first().unwrap()["event"], "setup");
    assert_eq!(events.last().unwrap()["event"], "terminate");
}

#[test]
fn mixed_formats() {
    let dir = tempfile::tempdir().unwrap();
    let fw = write(dir.path(), "gens.fw", "# two generators\nx0\nx1\n");
    let out = plsol(&["solve", &fw]);
    assert_eq!(out.status.code(), Some(1));
    let out = plsol(&["solve", "0:0 1/4:1/2 1/2:3/4 1:1", "(.((..).))|(.(.(..)))"]);
    assert_eq!(out.status.code(), Some(1));
    let out = plsol(&["solve", "x0", "g2", "g3"]);
    assert_eq!(json(&out)["derived_length"], 3);
}

#[test]
fn malformed_input_is_located() {
    let out = plsol(&["solve", "x0", "0:0 1/2:x 1:1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("argument 2"), "{err}");
    assert!(err.contains("column 9"), "{err}");

    let dir = tempfile::tempdir().unwrap();
    let bad = write(
        dir.path(),
        "bad.json",
        "[[\"0\",\"0\"],\n[\"1/2\",\"1/0\"],[\"1\",\"1\"]]",
    );
    let out = plsol(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 2"));

    let out = plsol(&["solve", "0:0 1/2:3/4 1/4:1/2 1:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn membership() {
    let out = plsol(&["member", "x0^2", "x0", "g2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["member"], true);
    assert_eq!(v["word"], "z0^2");

    let target = x0().compose(&g2()).compose(&x0().inverse()).to_string();
    let out = plsol(&["member", &target, "x0", "g2"]);
    assert_eq!(out.status.code(), Some(0));

    let out = plsol(&["member", "x1", "x0", "g2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["member"], false);

    let out = plsol(&["member", "x0", "x0", "x1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["violation"]["property"], "Z1");
}

#[test]
fn witness_point_overrides() {
    let out = plsol(&["member", "g2", "x0", "g2", "--witness-points", "1/2,-"]);
    assert_eq!(out.status.code(), Some(0));
    // A point whose window misses the nested orbital breaks Z3.
    let out = plsol(&["member", "g2", "x0", "g2", "--witness-points", "1/8"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["violation"]["property"], "Z3");
}

#[test]
fn inspect_reports_round_trip() {
    let out = plsol(&["inspect", "id", "x0", "two_bump"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["orbitals"].as_array().unwrap().len(), 0);
    assert_eq!(
        v[1]["factors"][0]["end_slopes"],
        serde_json::json!(["2", "1/2"])
    );
    assert_eq!(v[2]["factors"].as_array().unwrap().len(), 2);
    for f in v[2]["factors"].as_array().unwrap() {
        let back: PLMap = serde_json::from_value(f["signature"].clone()).unwrap();
        assert!(!back.is_identity());
    }
    let back: PLMap = serde_json::from_value(v[1]["element"].clone()).unwrap();
    assert_eq!(back, x0());
}

#[test]
fn render_is_deterministic() {
    let a = plsol(&["render", "x0", "g2", "g3"]);
    let b = plsol(&["render", "x0", "g2", "g3"]);
    assert_eq!(a.stdout, b.stdout);
    let svg = String::from_utf8(a.stdout).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("tower height 3"));
    let text =
        String::from_utf8(plsol(&["render", "--picture", "text", "x0", "x1"]).stdout).unwrap();
    assert!(text.contains("shared endpoints: 1"));
}

#[test]
fn probe_exit_codes() {
    let out = plsol(&["probe", "--max-ball", "1", "x0", "x1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["bad_overlap"]["class"], "one-sided-overlap");
    let out = plsol(&["probe", "--max-ball", "3", "x0", "g2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["bad_overlap"].is_null());
}

#[test]
fn text_format() {
    let out = plsol(&["--format", "text", "solve", "x0", "g2"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("soluble with derived length 2"));
}
