use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmeval"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn setup(files: &[(&str, &str)]) -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    for (name, body) in files {
        fs::write(dir.path().join(name), body).unwrap();
    }
    dir
}

const DIAG3: &str = r#"{"labels": ["0", "1"], "matrix": [[3, 0], [0, 3]]}"#;

#[test]
fn eval_vectors_text() {
    let dir = setup(&[
        ("a.txt", "COVID\nHealthy\nFlu\nFlu\nCOVID\n"),
        ("p.txt", "Flu\nHealthy\nCOVID\nFlu\nHealthy"),
    ]);
    let out = stdout(&run(
        dir.path(),
        &["eval", "--actual", "a.txt", "--pred", "p.txt"],
    ));
    assert!(out.starts_with(
        "Actual \\ Predict  COVID  Flu  Healthy\nCOVID                 0    1        1\n"
    ));
    assert!(out.contains("OVERALL_ACC         0.40000\n"));
    assert!(out.contains("Class Statistics:"));
    assert!(out.contains("LANDIS_KOCH   Slight\n"));
}

#[test]
fn eval_perfect_matrix_json() {
    let dir = setup(&[("m.json", DIAG3)]);
    let out = stdout(&run(
        dir.path(),
        &["--format", "json", "eval", "--matrix", "m.json"],
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    for label in ["0", "1"] {
        for m in ["ACC", "TPR", "TNR", "PPV", "NPV", "F1", "MCC", "AUC"] {
            assert_eq!(v["class_stat"][label][m], 1.0, "{m}[{label}]");
        }
        // FPR = 0 leaves the likelihood ratio undefined.
        assert!(v["class_stat"][label]["PLR"].is_null());
    }
    assert_eq!(v["overall_stat"]["KAPPA"], 1.0);
}

#[test]
fn eval_csv_and_label_order() {
    let dir = setup(&[
        ("a.txt", "x\ny\nx\n"),
        ("p.txt", "x\ny\ny\n"),
        ("order.txt", "y\nx\nz\n"),
    ]);
    let out = stdout(&run(
        dir.path(),
        &[
            "--format",
            "csv",
            "eval",
            "--actual",
            "a.txt",
            "--pred",
            "p.txt",
            "--labels",
            "order.txt",
        ],
    ));
    assert!(out.starts_with("scope,metric,class,value\nclass,ACC,y,"));
    assert!(out.contains("class,PPV,z,\n"));
}

#[test]
fn eval_length_mismatch_is_named() {
    let dir = setup(&[("a.txt", "x\ny\n"), ("p.txt", "x\ny\nx\n")]);
    let out = run(
        dir.path(),
        &["eval", "--actual", "a.txt", "--pred", "p.txt"],
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("length mismatch"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn eval_rejects_both_input_modes() {
    let dir = setup(&[("m.json", DIAG3), ("a.txt", "0\n"), ("p.txt", "0\n")]);
    let out = run(
        dir.path(),
        &[
            "eval", "--matrix", "m.json", "--actual", "a.txt", "--pred", "p.txt",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn scales_override_changes_levels() {
    let scale = r#"[{"id": "LANDIS_KOCH", "metric": "KAPPA", "levels": [
        {"name": "Bad", "lower": null, "upper": 0.5, "rank": 0},
        {"name": "Fine", "lower": 0.5, "upper": 1, "rank": 1}]}]"#;
    let dir = setup(&[
        ("m.json", DIAG3),
        ("s.json", scale),
        ("bad.json", "[{\"id\": \"NOPE\"}]"),
    ]);
    let out = stdout(&run(
        dir.path(),
        &["--scales", "s.json", "eval", "--matrix", "m.json"],
    ));
    assert!(out.contains("LANDIS_KOCH   Fine\n"));
    let out = run(
        dir.path(),
        &["--scales", "bad.json", "eval", "--matrix", "m.json"],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compare_identical_has_no_best() {
    let dir = setup(&[("a.json", DIAG3), ("b.json", DIAG3)]);
    let out = stdout(&run(dir.path(), &["compare", "a.json", "b.json"]));
    assert!(
        out.starts_with("Best : None\n\nRank  Name            Class-Score       Overall-Score\n")
    );
    assert!(out.contains("1     a               1.00000           1.00000\n"));
}

#[test]
fn compare_json_and_dominance() {
    let dir = setup(&[
        (
            "good.json",
            r#"{"labels": ["0", "1"], "matrix": [[5, 0], [0, 5]]}"#,
        ),
        (
            "fair.json",
            r#"{"labels": ["0", "1"], "matrix": [[4, 1], [1, 4]]}"#,
        ),
    ]);
    let out = stdout(&run(
        dir.path(),
        &["--format", "json", "compare", "fair.json", "good.json"],
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["best"], "good");
    assert_eq!(v["rows"][0]["name"], "good");
    assert_eq!(v["rows"][1]["rank"], 2);
}

#[test]
fn compare_weight_errors() {
    let dir = setup(&[
        ("a.json", DIAG3),
        (
            "b.json",
            r#"{"labels": ["0", "1"], "matrix": [[2, 1], [1, 2]]}"#,
        ),
        ("zero.json", r#"{"0": 0, "1": 0}"#),
        ("unknown.json", r#"{"7": 1}"#),
        ("text.json", r#"{"0": "high"}"#),
    ]);
    for w in ["zero.json", "unknown.json", "text.json"] {
        let out = run(
            dir.path(),
            &["compare", "a.json", "b.json", "--class-weights", w],
        );
        assert_eq!(out.status.code(), Some(2), "{w}");
        assert!(!out.stderr.is_empty());
    }
    let out = run(dir.path(), &["compare", "x=a.json", "x=b.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curve_fixture_points() {
    let dir = setup(&[(
        "s.csv",
        "actual,a,b\na,0.9,0.1\nb,0.4,0.6\na,0.6,0.4\nb,0.1,0.9\n",
    )]);
    let out = stdout(&run(
        dir.path(),
        &[
            "curve",
            "--scores",
            "s.csv",
            "--class",
            "a",
            "--out-dir",
            "o",
        ],
    ));
    assert_eq!(out, "class,roc_auc\na,1.0\n");
    let points = fs::read_to_string(dir.path().join("o/roc_a.csv")).unwrap();
    assert_eq!(
        points,
        "threshold,x,y\ninf,0,0\n0.9,0,0.5\n0.6,0,1\n0.4,0.5,1\n0.1,1,1\n"
    );
    assert!(!dir.path().join("o/roc_b.csv").exists());
    let summary: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("o/roc_auc.json")).unwrap())
            .unwrap();
    assert_eq!(summary["auc"]["a"], 1.0);
}

#[test]
fn curve_constant_scores_and_thresholds() {
    let dir = setup(&[
        (
            "s.csv",
            "actual,yes,no\nyes,0.5,0.5\nno,0.5,0.5\nyes,0.5,0.5\n",
        ),
        ("t.txt", "0.75\n0.25\n"),
        ("t2.txt", "0.25\n0.5\n"),
        ("bad_t.txt", "1.5\n"),
    ]);
    let out = stdout(&run(
        dir.path(),
        &[
            "--format",
            "json",
            "curve",
            "--scores",
            "s.csv",
            "--out-dir",
            "o",
        ],
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["auc"]["yes"], 0.5);
    assert_eq!(v["kind"], "ROC");

    // Nothing is called positive at 0.75, so only one PR point survives.
    let out = run(
        dir.path(),
        &[
            "curve",
            "--scores",
            "s.csv",
            "--kind",
            "pr",
            "--thresholds",
            "t.txt",
            "--out-dir",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(!out.stderr.is_empty());
    assert!(!dir.path().join("o/pr_yes.csv").exists());

    stdout(&run(
        dir.path(),
        &[
            "curve",
            "--scores",
            "s.csv",
            "--kind",
            "pr",
            "--thresholds",
            "t2.txt",
            "--out-dir",
            "o",
        ],
    ));
    let pr = fs::read_to_string(dir.path().join("o/pr_yes.csv")).unwrap();
    assert_eq!(
        pr,
        "threshold,x,y\n0.5,1,0.6666666666666666\n0.25,1,0.6666666666666666\n"
    );

    let out = run(
        dir.path(),
        &[
            "curve",
            "--scores",
            "s.csv",
            "--thresholds",
            "bad_t.txt",
            "--out-dir",
            "o",
        ],
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn curve_degenerate_class_warns() {
    let dir = setup(&[("s.csv", "actual,a,b,c\na,0.7,0.2,0.1\nb,0.2,0.7,0.1\n")]);
    let out = run(
        dir.path(),
        &["curve", "--scores", "s.csv", "--out-dir", "o"],
    );
    assert_eq!(out.status.code(), Some(0));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("class `c`"), "{err}");
    assert_eq!(
        String::from_utf8_lossy(&out.stdout),
        "class,roc_auc\na,1.0\nb,1.0\nc,None\n"
    );
    assert!(dir.path().join("o/roc_a.csv").exists());
    assert!(!dir.path().join("o/roc_c.csv").exists());
}

#[test]
fn curve_input_errors() {
    let dir = setup(&[
        ("s.csv", "actual,a,b\na,0.7,0.3\nb,0.2,0.8\n"),
        ("header.csv", "label,a,b\na,0.7,0.3\n"),
        ("range.csv", "actual,a,b\na,1.7,0.3\n"),
    ]);
    for args in [
        &["curve", "--scores", "header.csv", "--out-dir", "o"][..],
        &["curve", "--scores", "range.csv", "--out-dir", "o"],
        &[
            "curve",
            "--scores",
            "s.csv",
            "--class",
            "z",
            "--out-dir",
            "o",
        ],
        &[
            "curve",
            "--scores",
            "s.csv",
            "--kind",
            "lift",
            "--out-dir",
            "o",
        ],
        &["curve", "--scores", "s.csv"],
    ] {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn help_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["eval", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("LAMBDA_A"));
}
