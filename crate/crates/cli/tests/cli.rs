use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(format!("{name}.gog"))
}

fn run(args: &[&str], spec: &str) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gogauto"));
    cmd.arg(args[0]).arg(fixture(spec)).args(&args[1..]);
    cmd.output().expect("spawn gogauto")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn value<'a>(text: &'a str, key: &str) -> Option<&'a str> {
    text.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix('='))
}

#[test]
fn validate_fixtures() {
    for name in ["modg", "sl2z", "zhnn", "zstar"] {
        let o = run(&["validate"], name);
        assert_eq!(o.status.code(), Some(0), "{name}");
        assert_eq!(value(&stdout(&o), "valid"), Some("yes"));
    }
}

#[test]
fn nf_of_a_relator_is_the_identity() {
    let o = run(&["nf", "--word", "a a b b b"], "sl2z");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "identity"), Some("yes"));
    assert_eq!(value(&out, "nf_word"), Some("ε"));
}

#[test]
fn eq_merges_tree_edge_letters() {
    let o = run(&["eq", "--word", "a2", "--word2", "b3"], "sl2z");
    assert_eq!(value(&stdout(&o), "equal"), Some("yes"));
    let o = run(&["eq", "--word", "a", "--word2", "b"], "sl2z");
    assert_eq!(value(&stdout(&o), "equal"), Some("no"));
}

#[test]
fn check_ft_reports_a_stable_constant() {
    let o = run(&["check-ft", "--ygraph", "default", "--maxlen", "7"], "modg");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "K"), Some("1"));
    assert_eq!(value(&out, "stable"), Some("yes"));
}

#[test]
fn check_ft_fails_below_the_constant() {
    let o = run(&["check-ft", "--bound", "0", "--maxlen", "4"], "modg");
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert_eq!(value(&out, "K"), Some("none"));
    assert!(value(&out, "witness").is_some());
}

#[test]
fn deploy_agrees_with_direct_languages() {
    let o = run(&["deploy", "--depth", "2"], "sl2z");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "mismatches"), Some("0"));
    assert_eq!(value(&out, "equivariance_failures"), Some("0"));
    assert_eq!(value(&out, "image_size"), Some("3"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [&["deploy", "--depth", "2"][..], &["boundary"], &["tree", "--format", "dot"], &["export-fsa"]] {
        let a = run(args, "modg");
        let b = run(args, "modg");
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_file_matches_stdout() {
    let path = std::env::temp_dir().join(format!("gogauto-l-{}.fsa", std::process::id()));
    let o = run(&["export-fsa", "--out", path.to_str().unwrap()], "modg");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), stdout(&o));
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn split_adds_one_vertex() {
    let o = run(&["split", "--word", "a b", "--class", "copy"], "modg");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "vertices"), Some("4"));
    assert!(value(&out, "vertex.3").unwrap().ends_with("class=copy"));
}

#[test]
fn collapse_writes_a_readable_ygraph() {
    let dir = std::env::temp_dir().join(format!("gogauto-collapse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let o = run(&["collapse", "--v1", "E0", "--v2", "E^-1.1", "--out", dir.to_str().unwrap()], "modg");
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(value(&out, "outcome"), Some("success"));
    let written = value(&out, "written").expect("written path").to_string();
    let o = run(&["ygraph-validate", "--ygraph", &written], "modg");
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(value(&stdout(&o), "violations"), Some("0"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn ray_classification() {
    let o = run(&["classify-ray", "--ray-v", "a b"], "modg");
    assert_eq!(value(&stdout(&o), "class"), Some("end"));
    let o = run(&["classify-ray", "--ray-v", "c"], "zstar");
    assert_eq!(value(&stdout(&o), "class"), Some("boundary-point"));
    let o = run(&["classify-ray", "--ray-v", "a a"], "modg");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    let o = run(&["nf", "--word", "zz"], "modg");
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error="));
    let o = run(&["validate"], "missing");
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["ball", "--node-cap", "0"], "modg");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn malformed_spec_is_a_verification_failure() {
    let path = std::env::temp_dir().join(format!("gogauto-bad-{}.gog", std::process::id()));
    std::fs::write(&path, "garbage\n").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_gogauto")).arg("validate").arg(&path).output().unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(value(&stdout(&o), "valid"), Some("no"));
}
