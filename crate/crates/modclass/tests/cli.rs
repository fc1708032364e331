//! End-to-end tests of the command-line binary: exit codes, output formats,
//! shorthand parsing, and byte-level determinism of JSON reports.

use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn ring_summary_table() {
    let out = run(&["--ring", "zmod:8", "ring"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("size 8"), "{text}");
    assert!(text.contains("commutative true"), "{text}");
}

#[test]
fn json_report_has_schema_and_is_deterministic() {
    let args = ["--ring", "zmod:4", "--format", "json", "corpus"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "identical runs produce identical bytes");
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["schema"], "modclass-report/1");
    assert!(v["report"]["members"].as_u64().unwrap() > 0);
    assert_eq!(v["caps"]["max_module_size"], 65536);
}

#[test]
fn classify_module_spec_sum() {
    let out = run(&[
        "--ring",
        "zmod:8",
        "classify",
        "--module",
        "sum(simple:0, regular)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("C1 false"), "Z/2 + Z/8 is not C1: {text}");
}

#[test]
fn raw_table_module_spec() {
    // Z/2 over Z/2 given as explicit tables
    let out = run(&[
        "--ring",
        "zmod:2",
        "classify",
        "--module",
        r#"{"add": [[0,1],[1,0]], "act": [[0,0],[0,1]]}"#,
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("injective true"));
}

#[test]
fn suite_pass_and_fail_exit_codes() {
    let ok = run(&["--ring", "ut2:2", "suite", "mainC1"]);
    assert_eq!(ok.status.code(), Some(0));
    let fail = run(&["--ring", "zmod:8", "suite", "mainC1"]);
    assert_eq!(fail.status.code(), Some(1), "failing suite exits 1");
    assert!(stdout(&fail).contains("FAIL"));
}

#[test]
fn usage_errors_exit_2() {
    let bad_ring = run(&["--ring", "nonsense", "ring"]);
    assert_eq!(bad_ring.status.code(), Some(2));
    let bad_suite = run(&["--ring", "zmod:4", "suite", "nope"]);
    assert_eq!(bad_suite.status.code(), Some(2));
    let bad_module = run(&["--ring", "zmod:4", "classify", "--module", "simple:7"]);
    assert_eq!(bad_module.status.code(), Some(2));
}

#[test]
fn cap_exceeded_exits_3() {
    // hull of the non-injective simple needs a module bigger than the cap
    let out = Command::new(env!("CARGO_BIN_EXE_modclass"))
        .args(["--ring", "zmod:8", "--module-cap", "2", "hull", "--module", "simple:0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn env_cap_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_modclass"))
        .env("MODCLASS_MAX_MODULE_SIZE", "2")
        .args(["--ring", "zmod:8", "hull", "--module", "simple:0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn preenvelope_over_z8_is_bounded_evidence_only() {
    // over Z/8 the uniform condition fails: the certificate is evidence only
    // and the constructed target is itself outside C1, so the run exits 1
    let out = run(&[
        "--ring",
        "zmod:8",
        "preenvelope",
        "--module",
        "sum(simple:0, regular)",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("BoundedEvidence"), "{text}");
    assert!(text.contains("target C1 false"), "{text}");
}

#[test]
fn preenvelope_over_z4_is_conclusive() {
    let out = run(&["--ring", "zmod:4", "preenvelope", "--module", "simple:0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("Conclusive"), "{text}");
    assert!(text.contains("verification pass true"), "{text}");
}

#[test]
fn keytrick_on_non_injective_simple() {
    let out = run(&["--ring", "zmod:8", "keytrick", "--module", "simple:0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("A+B not summand true"));
}
