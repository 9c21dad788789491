use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "dgdef", "examples", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn dgdef(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgdef")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn schema() -> jsonschema::Validator {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "schema", "report.json"].iter().collect();
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("dgdef-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_writes_schema_valid_json() {
    let out = tmp("ex66.json");
    let o = dgdef(&["verify", "ex6.6", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(schema().is_valid(&v), "{v}");
    assert_eq!(v["status"], "verified");
}

#[test]
fn forced_small_bound_exits_three() {
    let out = tmp("ex27.json");
    let o = dgdef(&["verify", "ex2.7", "--max-wordlen", "1", "--json", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(schema().is_valid(&v));
    assert_eq!(v["status"], "inconclusive-truncation");
}

#[test]
fn window_flag_accepts_negative_bounds() {
    let o = dgdef(&["verify", "ex2.6b", "--window", "-2:0"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("degrees [-2, 0]"));
}

#[test]
fn unknown_example_fails_cleanly() {
    let o = dgdef(&["verify", "ex1.1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ex1.1"));
}

#[test]
fn props_json_is_schema_valid_and_deterministic() {
    let a = tmp("props-a.json");
    let b = tmp("props-b.json");
    for p in [&a, &b] {
        let o = dgdef(&["props", "--suite", "tower", "--trials", "20", "--seed", "4", "--json", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let va: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&a).unwrap()).unwrap();
    let vb: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&b).unwrap()).unwrap();
    assert!(schema().is_valid(&va));
    assert_eq!(va["evidence"], vb["evidence"]);
    assert_eq!(va["passed"], 20);
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let o = dgdef(&["props", "--suite", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("unknown suite"));
}

#[test]
fn factor_tate_of_dual_point() {
    let o = dgdef(&["factor", "--kind", "cfw", "--depth", "2", &data("x2.dga")]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("diff e1_1 = x^2"), "{s}");
    assert!(s.contains("\"right_weak_equivalence\": true"), "{s}");
}

#[test]
fn lift_problem_file() {
    let o = dgdef(&["lift", &data("lift.inst")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"chain_map\": true"));
}

#[test]
fn lift_idem_instance() {
    let o = dgdef(&["lift-idem", &data("idem.inst")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("map z2 = -eps*x"), "{s}");
    assert!(!s.contains("\"holds\": false"));
}

#[test]
fn lift_fact_instance_reduces_to_input() {
    let o = dgdef(&["lift-fact", "--kind", "cwf", &data("fact.inst")]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("middle reduces to the given middle"));
}

#[test]
fn mc_and_deform() {
    let args = ["--artin", &data("dual.dga"), "--xi", &data("desk_xi.der")];
    let o = dgdef(&[&["mc", &data("desk.dga")][..], &args[..]].concat());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"mc\": true"));
    let out = tmp("deformed.dga");
    let o = dgdef(&[&["deform", &data("desk.dga")][..], &args[..], &["--emit", out.to_str().unwrap()][..]].concat());
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.contains("diff y = eps*x"), "{text}");
}

#[test]
fn tangent_of_dual_point() {
    let o = dgdef(&["tangent", &data("x2.dga"), "--depth", "2", "--degrees", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"1\": 1"), "{}", stdout(&o));
}

#[test]
fn bad_derivation_file_reports_line() {
    let bad = tmp("bad.der");
    std::fs::write(&bad, "degree 1\nder q = x\n").unwrap();
    let o = dgdef(&["mc", &data("desk.dga"), "--artin", &data("dual.dga"), "--xi", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}
