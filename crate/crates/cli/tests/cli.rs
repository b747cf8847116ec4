use std::process::Command;

use cstlc::run_cli;
use cstlc_core::typecheck::check_program;
use cstlc_core::{parse, DiagCode};
use serde_json::Value;

const CMONOID: &str = include_str!("data/cmonoid.cst");

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

/// Runs in-process with `stdin` as input and returns (exit, stdout, stderr).
fn run(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("cstlc").chain(args.iter().copied());
    let code = run_cli(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_json(args: &[&str], stdin: &str) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let (code, out, _) = run(&full, stdin);
    (code, serde_json::from_str(&out).expect("stdout is one JSON object"))
}

#[test]
fn check_worked_example() {
    assert_eq!(run(&["check", "-"], CMONOID), (0, "Nat\n".into(), String::new()));
    let (code, out, _) = run(&["check", &data("cmonoid.cst")], "");
    assert_eq!((code, out.as_str()), (0, "Nat\n"));
}

#[test]
fn run_worked_example() {
    assert_eq!(run(&["run", "-"], CMONOID), (0, "3\n".into(), String::new()));
    let (code, v) = run_json(&["run", "-"], CMONOID);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["mainType"], "Nat");
    assert_eq!(v["value"], "3");
    assert_eq!(v["diagnostics"], Value::Array(vec![]));
}

#[test]
fn duplicate_concepts_exit_one() {
    let src = "concept A x : Nat endc concept A y : Bool endc 0";
    let (code, out, err) = run(&["check", "-"], src);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("error[duplicate-name] A"), "{err}");

    let (code, v) = run_json(&["check", "-"], src);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "check-error");
    assert_eq!(v["diagnostics"][0]["code"], "duplicate-name");
    assert_eq!(v["diagnostics"][0]["subject"], "A");
    assert!(v.get("mainType").is_none());
}

#[test]
fn json_diagnostics_match_library() {
    let src = "concept C f : Nat g : Bool endc
               model M of C f = true h = 0 endm
               model N of D endm
               x";
    let mut expected: Vec<(String, String)> = match check_program(&parse(src).unwrap()) {
        Ok(_) => panic!("program should be rejected"),
        Err(ds) => ds.code_subjects().into_iter().map(|(c, s)| (c.as_str().to_string(), s.to_string())).collect(),
    };
    expected.sort();
    let (code, v) = run_json(&["check", "-"], src);
    assert_eq!(code, 1);
    let mut got: Vec<(String, String)> = v["diagnostics"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["code"].as_str().unwrap().to_string(), d["subject"].as_str().unwrap().to_string()))
        .collect();
    got.sort();
    assert_eq!(got, expected);
    for code in [DiagCode::MissingMember, DiagCode::ExtraMember, DiagCode::UnboundReference] {
        assert!(got.iter().any(|(c, _)| c == code.as_str()), "{code} in {got:?}");
    }
}

#[test]
fn parse_error_has_location() {
    let (code, v) = run_json(&["check", "-"], "concept C\n  f : Nat\nendc\n(\\x:Nat. x");
    assert_eq!(code, 1);
    assert_eq!(v["status"], "parse-error");
    let d = &v["diagnostics"][0];
    assert_eq!(d["code"], "parse-error");
    assert_eq!(d["line"], 4);
    assert!(d["col"].as_u64().unwrap() >= 1);

    let (code, _, err) = run(&["run", "-"], "if true then 1");
    assert_eq!(code, 1);
    assert!(err.contains("error[parse-error]"), "{err}");
}

#[test]
fn out_of_fuel_exit_three() {
    let src = "plus (plus 1 2) (plus 3 4)";
    assert_eq!(run(&["run", "-"], src).0, 0);
    let (code, out, err) = run(&["run", "--fuel", "1", "-"], src);
    assert_eq!(code, 3);
    assert!(out.is_empty());
    assert!(!err.is_empty());
    let (code, v) = run_json(&["run", "--fuel", "0", "-"], src);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "out-of-fuel");
    assert_eq!(v["mainType"], "Nat");
    assert!(v.get("value").is_none());
}

#[test]
fn check_does_not_evaluate() {
    assert_eq!(run(&["check", "--fuel", "0", "-"], "plus 1 2").0, 0);
}

#[test]
fn usage_and_io_errors_exit_two() {
    assert_eq!(run(&[], "").0, 2);
    assert_eq!(run(&["check"], "").0, 2);
    assert_eq!(run(&["eval", "-"], "").0, 2);
    assert_eq!(run(&["check", "--format", "yaml", "-"], "").0, 2);
    assert_eq!(run(&["run", "--fuel", "-3", "-"], "").0, 2);
    let (code, v) = run_json(&["check", "/nonexistent/prog.cst"], "");
    assert_eq!(code, 2);
    assert_eq!(v["status"], "io-error");
    assert_eq!(v["diagnostics"][0]["subject"], "/nonexistent/prog.cst");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"], "");
    assert_eq!(code, 0);
    assert!(out.contains("dump-ast"));
}

#[test]
fn dump_ast_both_formats() {
    let (code, out, _) = run(&["dump-ast", "-"], CMONOID);
    assert_eq!(code, 0);
    assert!(out.contains("CMonoid") && out.contains("MAdd"));

    let (code, v) = run_json(&["dump-ast", "-"], CMONOID);
    assert_eq!(code, 0);
    let ast = &v["value"];
    assert_eq!(ast["concepts"][0]["name"], "CMonoid");
    assert_eq!(ast["models"][0]["concept"], "CMonoid");
    assert_eq!(ast["models"][0]["members"][1]["name"], "op");
    assert_eq!(ast["main"]["tag"], "MApp");
    assert_eq!(ast["main"]["model"], "MAdd");
}

#[test]
fn dump_ast_skips_checking() {
    assert_eq!(run(&["dump-ast", "-"], "undefined_var").0, 0);
    assert_eq!(run(&["check", "-"], "undefined_var").0, 1);
}

#[test]
fn binary_end_to_end() {
    let out = Command::new(env!("CARGO_BIN_EXE_cstlc"))
        .args(["run", "--format", "json", &data("cmonoid.cst")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["value"], "3");

    let out = Command::new(env!("CARGO_BIN_EXE_cstlc")).args(["check"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
