use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_gamechrom"));
    c.env_remove("GAMECHROM_JOBS")
        .env_remove("GAMECHROM_MEMO_MB");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data(name: &str) -> String {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "core",
        "constructions",
        name,
    ]
    .iter()
    .collect();
    p.to_str().unwrap().to_string()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn chig_examples() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["chig", &data("tprime.forest")]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("4 (closed-form: "), "{}", stdout(&o));

    let p5 = write(dir.path(), "p5.forest", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    assert!(stdout(&run(&["chig", &p5])).starts_with("3 ("));

    let empty = write(dir.path(), "empty.forest", "0 0\n");
    assert!(stdout(&run(&["chig", &empty])).starts_with("0 ("));
}

#[test]
fn chig_reports_parse_errors_with_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.forest", "3 2\n0 1\n1 7\n");
    let o = run(&["chig", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn solve_examples() {
    let dir = tempfile::tempdir().unwrap();
    let p5 = write(dir.path(), "p5.forest", "5 4\n0 1\n1 2\n2 3\n3 4\n");
    let o = run(&["solve", &p5, "--rules", "std", "--t", "2"]);
    assert_eq!(stdout(&o).lines().next(), Some("BobWin"));

    let o = run(&[
        "solve",
        &data("fig3.position"),
        "--rules",
        "ecg",
        "--t",
        "3",
        "--depth",
        "3",
    ]);
    assert!(stdout(&o).starts_with("certified BobWin"), "{}", stdout(&o));

    let k1 = write(dir.path(), "k1.forest", "1 0\n");
    assert_eq!(
        stdout(&run(&["solve", &k1, "--rules", "std", "--t", "1"]))
            .lines()
            .next(),
        Some("AliceWin")
    );
}

#[test]
fn solve_cache_round_trip_and_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("verdicts.cache");
    let cache = cache.to_str().unwrap();
    let tp = data("tprime.forest");
    let first = run(&["solve", &tp, "--t", "3", "--cache", cache]);
    assert_eq!(stdout(&first).lines().next(), Some("BobWin"));
    let second = run(&[
        "solve", &tp, "--t", "3", "--cache", cache, "--format", "json",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&second)).unwrap();
    assert_eq!(doc["results"][0]["verdict"], "BobWin");
    assert_eq!(doc["results"][0]["nodes"], 1);
    let other = run(&["solve", &tp, "--t", "3", "--rules", "mcg", "--cache", cache]);
    assert_eq!(other.status.code(), Some(2));
}

#[test]
fn memory_exhaustion_exits_3_and_flags_beat_environment() {
    let tp = data("tprime.forest");
    let o = bin()
        .args(["solve", &tp, "--t", "3"])
        .env("GAMECHROM_MEMO_MB", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
    let o = bin()
        .args(["--memo-mb", "64", "solve", &tp, "--t", "3"])
        .env("GAMECHROM_MEMO_MB", "0")
        .output()
        .unwrap();
    assert!(o.status.success());
}

#[test]
fn inconsistent_or_unknown_input_is_a_usage_error() {
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
    let o = run(&["solve", &data("t1.position"), "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_examples_and_round_trip() {
    let count = |args: &[&str]| stdout(&run(args)).lines().filter(|l| *l == "---").count() + 1;
    assert_eq!(count(&["enumerate", "--n", "4"]), 2);
    assert_eq!(count(&["enumerate", "--n", "3", "--forests"]), 3);
    assert_eq!(count(&["enumerate", "--n", "1"]), 1);

    let dir = tempfile::tempdir().unwrap();
    let all = write(
        dir.path(),
        "n7.forest",
        &stdout(&run(&["enumerate", "--n", "7"])),
    );
    let o = run(&["chig", &all]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 11);

    let out = dir.path().join("trees");
    assert!(
        run(&["enumerate", "--n", "6", "--out", out.to_str().unwrap()])
            .status
            .success()
    );
    assert_eq!(std::fs::read_dir(&out).unwrap().count(), 6);
}

#[test]
fn verify_suites_pass_and_are_deterministic() {
    for suite in [
        "thm-gcn2",
        "thm-u13",
        "lemma-small-trunk",
        "thm-nodeg3",
        "lemma-gadgets-s4",
        "lemma-gadgets-s8",
    ] {
        let one = run(&["verify", suite, "--max-n", "7"]);
        assert!(one.status.success(), "{suite}: {}", stdout(&one));
        let four = run(&["--jobs", "4", "verify", suite, "--max-n", "7"]);
        assert_eq!(stdout(&one), stdout(&four), "{suite}");
        assert!(stdout(&one).contains(" 0 failed, 0 errors"));
    }
    let o = run(&["verify", "enumeration-counts", "--max-n", "10"]);
    assert!(o.status.success());
}

#[test]
fn verify_output_formats() {
    let csv = stdout(&run(&["verify", "lemma-gadgets-s4", "--format", "csv"]));
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("suite,instance,order,graph,expected,actual,status")
    );
    assert_eq!(lines.count(), 2);
    let json = stdout(&run(&["verify", "lemma-gadgets-s8", "--format", "json"]));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["summary"]["instances"], 3);
    assert_eq!(doc["summary"]["failed"], 0);
}
