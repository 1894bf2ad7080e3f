use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn karyhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_karyhom")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Compares against `tests/golden/<name>`; `KARYHOM_BLESS=1` rewrites it.
fn golden(name: &str, args: &[&str], code: i32) {
    let out = karyhom(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    if std::env::var_os("KARYHOM_BLESS").is_some() {
        fs::write(&path, &out.stdout).unwrap();
    }
    let expected = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden {}", path.display()));
    assert_eq!(stdout(&out), expected, "golden {name} differs");
}

#[test]
fn golden_heisenberg_report() {
    golden("compute_heisenberg_3_2.json", &["compute", "--family", "heisenberg", "--k", "3", "--m", "2", "--format", "json"], 0);
}

#[test]
fn golden_free2_decomposition() {
    golden("decompose_free2_3_4_3.json", &["decompose", "--family", "free2", "--k", "3", "--n", "4", "--degree", "3", "--format", "json"], 0);
}

#[test]
fn golden_toral_table() {
    golden("table_toral_20.csv", &["table", "--toral", "--nmax", "20", "--k", "2,3,4,5", "--format", "csv"], 0);
}

#[test]
fn golden_free3_verification() {
    golden("verify_free3small_3.txt", &["verify", "--family", "free3small", "--k", "3"], 0);
}

#[test]
fn golden_algebra_dump() {
    golden("dump_acj_3_1.json", &["dump", "--family", "acj", "--k", "3", "--m", "1", "--format", "json"], 0);
}

#[test]
fn reports_carry_schema() {
    let out = karyhom(&["compute", "--family", "free3small", "--k", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema"], "karyhom/1");
    assert_eq!(v["kind"], "homology");
    assert_eq!(v["total"], 43);
}

#[test]
fn output_does_not_depend_on_threads() {
    let args = ["compute", "--family", "free2", "--k", "2", "--n", "4", "--format", "json"];
    let one = karyhom(&[&args[..], &["--threads", "1"]].concat());
    let four = karyhom(&[&args[..], &["--threads", "4"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn dump_round_trips_through_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("heis.json");
    let dump = karyhom(&["dump", "--family", "heisenberg", "--k", "3", "--m", "2", "--format", "json"]);
    fs::write(&path, &dump.stdout).unwrap();
    let p = path.to_str().unwrap();
    let from_file = karyhom(&["compute", "--input", p, "--format", "csv"]);
    let direct = karyhom(&["compute", "--family", "heisenberg", "--k", "3", "--m", "2", "--format", "csv"]);
    assert!(from_file.status.success());
    assert_eq!(from_file.stdout, direct.stdout);
}

#[test]
fn exports_matrix_market_differentials() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = karyhom(&["compute", "--family", "free3small", "--k", "3", "--export-mm", d]);
    assert!(out.status.success());
    let mut names: Vec<String> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["d3.mtx", "d5.mtx", "d7.mtx"]);
    let d5 = fs::read_to_string(dir.path().join("d5.mtx")).unwrap();
    assert!(d5.starts_with("%%MatrixMarket matrix coordinate integer general"));
    assert!(d5.lines().any(|l| l.trim() == "35 21 14" || l.starts_with("35 21 ")));
}

#[test]
fn degree_selection() {
    let out = karyhom(&["compute", "--family", "heisenberg", "--k", "3", "--m", "2", "--degree", "3,5", "--format", "csv"]);
    assert_eq!(stdout(&out).lines().count(), 3);
    let bad = karyhom(&["compute", "--family", "heisenberg", "--k", "3", "--m", "2", "--degree", "2"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    assert_eq!(karyhom(&["verify", "--family", "heisenberg", "--k", "3", "--m", "2"]).status.code(), Some(1));
    assert_eq!(karyhom(&["check", "--family", "acj", "--k", "3", "--m", "2"]).status.code(), Some(0));
    assert_eq!(karyhom(&["compute", "--family", "heisenberg", "--k", "3"]).status.code(), Some(2));
    assert_eq!(karyhom(&["compute", "--family", "heisenberg", "--k", "1", "--m", "2"]).status.code(), Some(2));
    assert_eq!(karyhom(&["compute", "--family", "bogus"]).status.code(), Some(2));
    assert_eq!(karyhom(&["table", "--nmax", "3"]).status.code(), Some(2));
    assert_eq!(karyhom(&["compute", "--family", "free2", "--k", "3", "--n", "6", "--size-cap", "100"]).status.code(), Some(3));
    assert_eq!(karyhom(&["decompose", "--family", "heisenberg", "--k", "3", "--m", "1", "--degree", "3"]).status.code(), Some(2));
}

#[test]
fn broken_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"arity": 2, "dim": 3, "brackets": [{"args": [1, 0], "value": [[1, 2]]}]}"#).unwrap();
    let out = karyhom(&["compute", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("strictly increasing"));
}
