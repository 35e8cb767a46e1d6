use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn moatrace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moatrace"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_e1_at_strength_two() {
    let e1 = fixture("e1.moa");
    let o = moatrace(&["moa-verify", path_str(&e1), "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("strength ≥ 2: yes"));
    assert!(stdout(&o).contains("MOA(8, 5, (2^2,2,2,2,2), 2)"));
}

#[test]
fn verify_e1_at_strength_three_fails_with_witness() {
    let e1 = fixture("e1.moa");
    let o = moatrace(&["moa-verify", path_str(&e1), "--t", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("strength ≥ 3: no"));
    assert!(stderr(&o).contains("NotUniform"));
    assert!(stderr(&o).contains("columns {1,2,3}"));
}

#[test]
fn analyze_with_failing_strength_exits_two() {
    let lh = fixture("lh_a.moa");
    let o = moatrace(&["moa-analyze", path_str(&lh), "--t", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NotUniform"));
    let o = moatrace(&["moa-analyze", path_str(&lh)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("MDS: no"));
}

#[test]
fn selftest_passes_embedded_and_from_directory() {
    let o = moatrace(&["fixtures-selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains(" 0 failed"));
    let dir = fixture("");
    let o = moatrace(&["fixtures-selftest", "--fixtures-dir", path_str(&dir)]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn selftest_fails_loudly_on_a_tampered_fixture() {
    let dir = tempfile::tempdir().unwrap();
    for entry in fs::read_dir(fixture("")).unwrap() {
        let p = entry.unwrap().path();
        fs::copy(&p, dir.path().join(p.file_name().unwrap())).unwrap();
    }
    let e1 = fs::read_to_string(fixture("e1.moa")).unwrap();
    fs::write(dir.path().join("e1.moa"), e1.replace("row 3 1 0 0 1", "row 3 1 0 1 1")).unwrap();
    let o = moatrace(&["fixtures-selftest", "--fixtures-dir", path_str(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("FAIL"));
    assert!(stderr(&o).contains("self-test checks failed"));
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.moa");
    fs::write(&bad, "moa q=2\ncols 2 1\nrow 0 0\n# note\nrow 4 1\n").unwrap();
    let o = moatrace(&["moa-analyze", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("AlphabetViolation"));
    assert!(stderr(&o).contains("line 5"));

    fs::write(&bad, "moa q=2\ncols 1 z\nrow 0 0\n").unwrap();
    let o = moatrace(&["moa-analyze", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("ParseError"));
    assert!(stderr(&o).contains("line 2, column 8"));

    fs::write(&bad, "# only a comment\n").unwrap();
    let o = moatrace(&["moa-analyze", path_str(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("EmptyFile"));

    let o = moatrace(&["moa-analyze", "/nonexistent/file.moa"]);
    assert_eq!(o.status.code(), Some(1));

    let e1 = fixture("e1.moa");
    let o = moatrace(&["moa-analyze", path_str(&e1), "--bogus"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nonlinear_trace_dual_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("nl.moa");
    fs::write(&f, "moa q=2\ncols 1 1\nrow 0 1\nrow 1 0\n").unwrap();
    let o = moatrace(&["moa-trace-dual", path_str(&f)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("NotLinear"));
}

#[test]
fn require_dual_without_self_dual_bases() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.code");
    fs::write(&f, "code q=3\ntype 2 1\ngen 1 0 1\ngen 0 1 1\n").unwrap();
    let o = moatrace(&["irmoa-from-code", path_str(&f), "--require-dual"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("SelfDualBasisUnavailable"));
    let o = moatrace(&["irmoa-from-code", path_str(&f)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("dual side not evaluated"));
}

#[test]
fn json_output_round_trips() {
    let e1 = fixture("e1.moa");
    let near = fixture("near_mds.moa");
    let code = fixture("sec6.code");
    let runs: Vec<Vec<&str>> = vec![
        vec!["field", "GF(2, 4)"],
        vec!["field", "GF(3^2)"],
        vec!["code-analyze", path_str(&code)],
        vec!["code-dual", path_str(&code)],
        vec!["moa-verify", path_str(&e1), "--t", "2"],
        vec!["moa-analyze", path_str(&near)],
        vec!["moa-from-code", path_str(&code)],
        vec!["moa-trace-dual", path_str(&e1)],
        vec!["irmoa-from-code", path_str(&code)],
        vec!["fixtures-selftest"],
    ];
    for mut args in runs {
        args.extend(["--format", "json"]);
        let o = moatrace(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
        let text = stdout(&o);
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = serde_json::to_string_pretty(&value).unwrap() + "\n";
        assert_eq!(again, text, "{args:?}");
        assert_eq!(stdout(&moatrace(&args)), text, "nondeterministic output for {args:?}");
    }
}

#[test]
fn conversion_output_is_a_valid_file() {
    let dir = tempfile::tempdir().unwrap();
    let code = fixture("sec6.code");
    let o = moatrace(&["moa-from-code", path_str(&code), "--basis", "poly"]);
    assert_eq!(o.status.code(), Some(0));
    let arr = dir.path().join("sec6.moa");
    fs::write(&arr, stdout(&o)).unwrap();
    let printed = fs::read_to_string(fixture("sec6.moa")).unwrap();
    let rows = |t: &str| {
        let mut v: Vec<String> = t.lines().filter(|l| l.starts_with("row")).map(String::from).collect();
        v.sort();
        v
    };
    assert_eq!(rows(&stdout(&o)), rows(&printed));
    let o = moatrace(&["moa-verify", path_str(&arr), "--t", "2"]);
    assert_eq!(o.status.code(), Some(0));

    let o = moatrace(&["code-dual", path_str(&code)]);
    let dual = dir.path().join("dual.code");
    fs::write(&dual, stdout(&o)).unwrap();
    let o = moatrace(&["code-dual", path_str(&dual)]);
    let back = dir.path().join("back.code");
    fs::write(&back, stdout(&o)).unwrap();
    let a = moatrace(&["code-analyze", path_str(&code)]);
    let b = moatrace(&["code-analyze", path_str(&back)]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn unsorted_blocks_are_reordered_and_reported() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("u.moa");
    fs::write(&f, "moa q=2\ncols 1 2\nrow 0 0\nrow 1 1\nrow 0 2\nrow 1 3\n").unwrap();
    let o = moatrace(&["moa-verify", path_str(&f), "--t", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("input column {2,1}"));
}
