use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mackey(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mackey"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = mackey(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}{}",
        stdout(&out),
        String::from_utf8_lossy(&out.stderr)
    );
    stdout(&out)
}

fn json(dir: &Path, args: &[&str]) -> Value {
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    serde_json::from_str(&ok(dir, &all)).unwrap()
}

#[test]
fn group_summary() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = ok(dir.path(), &["group", "--name", "cyclic:6"]);
    assert!(c6.contains("4 subgroups"), "{c6}");
    let s3 = ok(dir.path(), &["group", "--name", "symmetric:3"]);
    assert!(s3.contains("4 conjugacy classes"), "{s3}");
}

#[test]
fn bad_group_table_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("g.json"), r#"{"order":3,"mul":[[0,1,2],[1,0,0],[2,0,0]]}"#).unwrap();
    let out = mackey(dir.path(), &["group", "--file", "g.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not associative"));
}

#[test]
fn enumerate_c6() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(dir.path(), &["trsys", "enumerate", "--group", "cyclic:6"]);
    let systems = v["systems"].as_array().unwrap();
    assert_eq!(systems.len(), 10);
}

#[test]
fn generate_reports_closure_and_strict_validation_rejects_it() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["trsys", "generate", "--group", "cyclic:6", "--pairs", "C2>C6", "-o", "o.json"]);
    assert!(out.contains("added by closure: C1>C3"), "{out}");
    let closed = ok(dir.path(), &["trsys", "validate", "--system", "o.json", "--strict"]);
    assert!(closed.contains("closure adds: (none)"), "{closed}");

    fs::write(dir.path().join("open.json"), r#"{"group":"cyclic:6","pairs":[["C2","C6"]]}"#).unwrap();
    let relaxed = ok(dir.path(), &["trsys", "validate", "--system", "open.json"]);
    assert!(relaxed.contains("C1>C3"), "{relaxed}");
    let strict = mackey(dir.path(), &["trsys", "validate", "--system", "open.json", "--strict"]);
    assert_eq!(strict.status.code(), Some(2));
}

#[test]
fn disklike_reports_the_maximal_subsystem() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["trsys", "disklike", "--group", "cyclic:8", "--pairs", "C1>C8, C2>C4"]);
    assert!(out.contains("disk-like: false"), "{out}");
    assert!(out.contains("C1>C2, C1>C4, C1>C8"), "{out}");
}

#[test]
fn idempotent_tables() {
    let dir = tempfile::tempdir().unwrap();
    let c6 = ok(dir.path(), &["idempotents", "--group", "cyclic:6", "--pairs", "C2>C6"]);
    assert!(c6.contains("1/3 C6/C2"), "{c6}");
    assert!(c6.contains("e_C1 + e_C2"), "{c6}");
    let c8 = ok(dir.path(), &["idempotents", "--group", "cyclic:8", "--pairs", "C2>C4, C2>C8"]);
    assert!(c8.contains("C8/C8 - 1/4 C8/C2"), "{c8}");
    let minimal = json(dir.path(), &["idempotents", "--group", "cyclic:6"]);
    let classes = minimal["idempotents"].as_array().unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0]["display"], "C6/C6");
    assert_eq!(minimal["verified"], true);
}

#[test]
fn split_writes_files_that_reload() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["functor", "--group", "cyclic:6", "--pairs", "C2>C6", "-o", "b.json"]);
    let out = ok(d, &["--dot", "split.dot", "split", "--mackey", "b.json", "--out-dir", "out"]);
    assert!(out.contains("reassembly: verified"), "{out}");
    assert!(fs::read_to_string(d.join("split.dot")).unwrap().starts_with("digraph"));
    let cert: Value = serde_json::from_str(&fs::read_to_string(d.join("out/certificate.json")).unwrap()).unwrap();
    assert_eq!(cert["levels"].as_object().unwrap().len(), 4);
    for name in ["summand-C2.json", "summand-C6.json"] {
        let path = d.join("out").join(name);
        let again = ok(d, &["split", "--mackey", path.to_str().unwrap()]);
        assert!(again.contains("reassembly: verified"), "{name}: {again}");
    }
    // splitting the [C2] piece again leaves nothing in [C6]
    let piece = ok(d, &["--json", "split", "--mackey", "out/summand-C2.json"]);
    let v: Value = serde_json::from_str(&piece).unwrap();
    let c6 = v["summands"].as_array().unwrap().iter().find(|s| s["class"] == "C6").unwrap();
    assert_eq!(c6["dims"], serde_json::json!({"C1": 0, "C2": 0, "C3": 0, "C6": 0}));
}

#[test]
fn zero_functor_splits_into_zero() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    ok(d, &["functor", "--group", "cyclic:6", "--represented", "C1", "-o", "r.json"]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(d.join("r.json")).unwrap()).unwrap();
    for dim in v["levels"].as_object_mut().unwrap().values_mut() {
        *dim = 0.into();
    }
    for key in ["res", "tr", "conj"] {
        if let Some(maps) = v.get_mut(key).and_then(Value::as_object_mut) {
            for m in maps.values_mut() {
                *m = Value::Array(vec![]);
            }
        }
    }
    fs::write(d.join("z.json"), v.to_string()).unwrap();
    let out = json(d, &["split", "--mackey", "z.json"]);
    assert_eq!(out["verified"], true);
    for s in out["summands"].as_array().unwrap() {
        assert!(s["dims"].as_object().unwrap().values().all(|x| x == 0), "{out}");
    }
}

#[test]
fn paper_examples_pass() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["paper-examples"]);
    assert!(out.ends_with("8/8 examples passed\n"), "{out}");
    let c8 = ok(dir.path(), &["paper-examples", "--only", "c8"]);
    assert!(c8.ends_with("3/3 examples passed\n"), "{c8}");
    assert!(!c8.contains("c6-"), "{c8}");
}

#[test]
fn tampered_golden_gives_a_named_diff() {
    let dir = tempfile::tempdir().unwrap();
    let goldens = Path::new(env!("CARGO_MANIFEST_DIR")).join("goldens");
    for entry in fs::read_dir(&goldens).unwrap() {
        let entry = entry.unwrap();
        fs::copy(entry.path(), dir.path().join(entry.file_name())).unwrap();
    }
    let path = dir.path().join("c8-burnside-split.json");
    let text = fs::read_to_string(&path).unwrap().replacen("\"1/4 C8/C2\"", "\"1/8 C8/C2\"", 1);
    fs::write(&path, text).unwrap();
    let out = mackey(dir.path(), &["paper-examples", "--golden-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout(&out);
    assert!(report.contains("FAIL c8-burnside-split"), "{report}");
    assert!(report.contains("/classes/[C2]/idempotent"), "{report}");
    assert!(report.contains("PASS c6-burnside-split"), "{report}");
}

#[test]
fn paper_examples_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = mackey(dir.path(), &["--json", "paper-examples"]);
    let b = mackey(dir.path(), &["--json", "--jobs", "1", "paper-examples"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
