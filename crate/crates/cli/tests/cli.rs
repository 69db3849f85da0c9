use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn testdata() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/testdata")
}

fn lexicon() -> String {
    testdata().join("lexicon.manifest").display().to_string()
}

fn depsent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depsent"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn assert_fails(o: &Output) -> String {
    assert!(!o.status.success());
    assert!(
        o.stdout.is_empty(),
        "partial output: {}",
        String::from_utf8_lossy(&o.stdout)
    );
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    assert_eq!(err.trim_end().lines().count(), 1, "{err}");
    err
}

/// The running example copied as `doc1.conllu`.
fn doc1(dir: &TempDir) -> String {
    let path = dir.path().join("doc1.conllu");
    fs::copy(testdata().join("running_example.conllu"), &path).unwrap();
    path.display().to_string()
}

const NEGATIVE: &str = "\
1\tnot\tnot\tADV\t2\tneg
2\thandsome\thandsome\tADJ\t0\troot

1\tI\tI\tPRON\t2\tnsubj
2\tlike\tlike\tVERB\t0\troot
";

fn corpus(dir: &TempDir) -> String {
    doc1(dir);
    fs::write(dir.path().join("neg.conllu"), NEGATIVE).unwrap();
    let manifest = dir.path().join("corpus.tsv");
    fs::write(
        &manifest,
        "# id\tlabel\tpath\nd1\tpositive\tdoc1.conllu\nd2\tnegative\tneg.conllu\n",
    )
    .unwrap();
    manifest.display().to_string()
}

#[test]
fn analyze_running_example() {
    let dir = TempDir::new().unwrap();
    let out = depsent(&["analyze", "--lexicon", &lexicon(), "--input", &doc1(&dir)]);
    assert_eq!(stdout(&out), "doc1\t1.90\tpositive\t1.90\n");
}

#[test]
fn analyze_with_rule_subset() {
    let dir = TempDir::new().unwrap();
    let doc = doc1(&dir);
    let out = depsent(&[
        "analyze",
        "--lexicon",
        &lexicon(),
        "--rules-subset",
        "negation",
        "--input",
        &doc,
    ]);
    // handsome 4 -> 0 under negation alone, like stays at 1
    assert_eq!(stdout(&out), "doc1\t1.00\tpositive\t1.00\n");
    let none = depsent(&[
        "analyze",
        "--lexicon",
        &lexicon(),
        "--rules-subset",
        "",
        "--input",
        &doc,
    ]);
    assert_eq!(stdout(&none), "doc1\t5.00\tpositive\t5.00\n");
}

#[test]
fn explain_prints_state_table() {
    let dir = TempDir::new().unwrap();
    let out = stdout(&depsent(&[
        "explain",
        "--lexicon",
        &lexicon(),
        "--input",
        &doc1(&dir),
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("Step"));
    assert_eq!(lines.len(), 1 + 15 + 1);
    assert!(lines[4].contains("handsome_5") && lines[4].contains("[intensification:very(0,3)]"));
    assert!(lines[14].contains("[negation:not(0,2), but:but(0,1)]"));
    assert_eq!(*lines.last().unwrap(), "so\t1.90");
}

#[test]
fn explain_rejects_missing_sentence() {
    let dir = TempDir::new().unwrap();
    let err = assert_fails(&depsent(&[
        "explain",
        "--lexicon",
        &lexicon(),
        "--input",
        &doc1(&dir),
        "--sentence",
        "2",
    ]));
    assert!(err.contains("no sentence 2"), "{err}");
}

#[test]
fn emitted_rules_validate_and_match_builtin() {
    let dir = TempDir::new().unwrap();
    let xml = stdout(&depsent(&["emit-builtin-rules"]));
    let rules = dir.path().join("rules.xml");
    fs::write(&rules, &xml).unwrap();
    let rules = rules.display().to_string();

    let report = stdout(&depsent(&[
        "validate-rules",
        "--rules",
        &rules,
        "--lexicon",
        &lexicon(),
    ]));
    assert!(report.starts_with("ok\t4 operations\n"));
    let names: Vec<&str> = report
        .lines()
        .skip(1)
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(names, ["intensification", "but", "negation", "irrealis"]);

    let doc = doc1(&dir);
    let builtin = stdout(&depsent(&[
        "analyze",
        "--lexicon",
        &lexicon(),
        "--input",
        &doc,
        "--format",
        "trace",
    ]));
    let from_file = stdout(&depsent(&[
        "analyze",
        "--lexicon",
        &lexicon(),
        "--rules",
        &rules,
        "--input",
        &doc,
        "--format",
        "trace",
    ]));
    assert_eq!(builtin, from_file);
}

#[test]
fn invalid_rules_report_location() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("bad.xml");
    fs::write(
        &path,
        "<operations><operation name=\"x\"><forms>*</forms></operation></operations>",
    )
    .unwrap();
    let err = assert_fails(&depsent(&[
        "validate-rules",
        "--rules",
        &path.display().to_string(),
    ]));
    assert!(err.contains("operations/operation[1]"), "{err}");
}

#[test]
fn evaluate_accuracy_and_ablation() {
    let dir = TempDir::new().unwrap();
    let manifest = corpus(&dir);
    let out = stdout(&depsent(&[
        "evaluate",
        "--lexicon",
        &lexicon(),
        "--input",
        &manifest,
    ]));
    // d2 scores 0 + 1 > 0 and is misclassified
    assert_eq!(out, "accuracy\t0.5000\t1/2\n");

    let records = stdout(&depsent(&[
        "evaluate",
        "--lexicon",
        &lexicon(),
        "--input",
        &manifest,
        "--format",
        "records",
        "--jobs",
        "2",
    ]));
    assert_eq!(
        records,
        "d1\t1.90\tpositive\tpositive\nd2\t1.00\tpositive\tnegative\naccuracy\t0.5000\t1/2\n"
    );

    let table = stdout(&depsent(&[
        "evaluate",
        "--lexicon",
        &lexicon(),
        "--input",
        &manifest,
        "--ablation",
        "--format",
        "records",
    ]));
    let keys: Vec<&str> = table.lines().map(|l| l.split('=').next().unwrap()).collect();
    assert_eq!(keys, ["baseline", "+negation", "+intensification", "+irrealis"]);
}

#[test]
fn errors_are_one_line() {
    let dir = TempDir::new().unwrap();
    let doc = doc1(&dir);
    let err = assert_fails(&depsent(&[
        "analyze",
        "--lexicon",
        "/nonexistent/lex.manifest",
        "--input",
        &doc,
    ]));
    assert!(err.contains("/nonexistent/lex.manifest"), "{err}");
    let err = assert_fails(&depsent(&[
        "analyze",
        "--lexicon",
        &lexicon(),
        "--rules-subset",
        "sarcasm",
        "--input",
        &doc,
    ]));
    assert!(err.contains("sarcasm"), "{err}");
    let broken = dir.path().join("broken.conllu");
    fs::write(&broken, "1\tx\tx\tX\t7\troot\n").unwrap();
    let err = assert_fails(&depsent(&[
        "analyze",
        "--lexicon",
        &lexicon(),
        "--input",
        &doc,
        &broken.display().to_string(),
    ]));
    assert!(err.contains("broken.conllu"), "{err}");
}

#[test]
fn repeated_runs_are_identical() {
    let dir = TempDir::new().unwrap();
    let doc = doc1(&dir);
    let args = [
        "explain",
        "--lexicon",
        &lexicon(),
        "--input",
        &doc,
        "--format",
        "trace",
    ];
    assert_eq!(stdout(&depsent(&args)), stdout(&depsent(&args)));
}
