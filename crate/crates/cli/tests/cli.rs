use std::fs;
use std::path::{Path, PathBuf};

use assert_cmd::Command;
use polarscope::characterizer::classify;
use polarscope::io::read_point_set;
use tempfile::TempDir;

fn polarscope() -> Command {
    let mut cmd = Command::cargo_bin("polarscope").unwrap();
    cmd.env_remove("POLARSCOPE_THREADS");
    cmd
}

fn construct(dir: &TempDir, kind: &str, dim: &str, q: &str) -> PathBuf {
    let path = dir.path().join(format!("{kind}-{dim}-{q}.pts"));
    polarscope()
        .args(["construct", "--kind", kind, "--dim", dim, "--q", q, "-o"])
        .arg(&path)
        .assert()
        .success();
    path
}

fn stdout(cmd: &mut Command) -> String {
    String::from_utf8(cmd.output().unwrap().stdout).unwrap()
}

#[test]
fn classify_round_trip_matches_library() {
    let dir = TempDir::new().unwrap();
    for (kind, dim, q) in [("Q", "4", "3"), ("Q+", "3", "3"), ("Q-", "3", "4"), ("H", "2", "9")] {
        let path = construct(&dir, kind, dim, q);
        let (space, set) = read_point_set(&fs::read_to_string(&path).unwrap()).unwrap();
        let lib = classify(&space, &set).unwrap();
        let out = stdout(polarscope().args(["classify", "--in"]).arg(&path));
        assert_eq!(out, lib.render_text(), "{kind} {dim} {q}");
        assert!(out.starts_with("verdict: ClassicalPolar("), "{out}");
    }
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "Q", "4", "3");
    polarscope()
        .args(["verify", "--kind", "Q", "--in"])
        .arg(&path)
        .assert()
        .code(0);
    // Right space, wrong kind: the size lemma alone fails.
    polarscope()
        .args(["verify", "--kind", "Q+", "--lemmas", "size", "--in"])
        .arg(construct(&dir, "Q-", "5", "3").as_path())
        .assert()
        .code(1);
    polarscope()
        .args(["verify", "--kind", "Q", "--lemmas", "nonsense", "--in"])
        .arg(&path)
        .assert()
        .code(2);
    polarscope().args(["verify", "--kind", "X"]).assert().code(2);
}

#[test]
fn parse_errors_report_the_line() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "Q", "2", "3");
    let mut text = fs::read_to_string(&path).unwrap();
    let second = text.lines().nth(1).unwrap().to_string();
    text.push_str(&second);
    text.push('\n');
    let dup = dir.path().join("dup.pts");
    fs::write(&dup, &text).unwrap();
    let line = text.lines().count();
    let out = polarscope().args(["classify", "--in"]).arg(&dup).assert().code(2);
    let err = String::from_utf8(out.get_output().stderr.clone()).unwrap();
    assert!(err.contains(&format!("line {line}")), "{err}");

    let missing: &Path = &dir.path().join("missing.pts");
    polarscope().args(["classify", "--in"]).arg(missing).assert().code(2);
}

#[test]
fn profile_json_and_double_counts() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "Q", "4", "3");
    let out = stdout(
        polarscope()
            .args(["--json", "profile", "--codim", "1", "--in"])
            .arg(&path),
    );
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["points"], 40);
    assert_eq!(v["histogram"]["16"], 45);
    assert_eq!(v["histogram"]["10"], 36);
    assert_eq!(v["histogram"]["13"], 40);
    assert!(v["double_counts"].as_array().unwrap().iter().all(|d| d["pass"] == true));
}

#[test]
fn dualize_then_classify() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "H", "3", "9");
    let dual = dir.path().join("dual.pts");
    polarscope()
        .args(["dualize", "-o"])
        .arg(&dual)
        .arg("--in")
        .arg(&path)
        .assert()
        .success();
    let out = stdout(polarscope().args(["classify", "--in"]).arg(&dual));
    assert!(out.starts_with("verdict: ClassicalPolar(Hermitian)"), "{out}");
}

#[test]
fn tits_counterexample() {
    let out = polarscope()
        .args(["counterexample", "tits", "--q", "8"])
        .assert()
        .code(0);
    let text = String::from_utf8(out.get_output().stdout.clone()).unwrap();
    assert!(
        text.lines().next().unwrap().contains("no quadratic form fits"),
        "{text}"
    );
}

#[test]
fn thread_count_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "Q-", "5", "3");
    let run = |threads: &str| {
        stdout(
            polarscope()
                .env("POLARSCOPE_THREADS", threads)
                .args(["verify", "--kind", "Q-", "--in"])
                .arg(&path),
        )
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn timing_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let path = construct(&dir, "Q", "4", "3");
    let plain = stdout(polarscope().args(["classify", "--in"]).arg(&path));
    assert!(!plain.contains("elapsed"));
    let timed = stdout(polarscope().args(["--timing", "classify", "--in"]).arg(&path));
    assert!(timed.ends_with("s\n") && timed.contains("elapsed: "));
}
