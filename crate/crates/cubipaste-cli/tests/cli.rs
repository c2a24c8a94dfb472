//! The binary end to end: exit codes, file errors and exports.

use std::path::Path;
use std::process::{Command, Output};

use cubipaste::coherator;
use cubipaste::io;
use cubipaste::runner;

fn cubipaste(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubipaste")).args(args).env("CUBIPASTE_THREADS", "1").output().unwrap()
}

fn text(b: &[u8]) -> String {
    String::from_utf8_lossy(b).into_owned()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.display().to_string()
}

#[test]
fn a_passing_suite_exits_zero() {
    let out = cubipaste(&["verify", "--suite", "cubical"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert!(text(&out.stderr).contains("cubical: pass"));
    assert!(text(&out.stdout).contains("\"passed\": true"));
}

#[test]
fn unknown_suites_exit_two_and_list_the_suites() {
    let out = cubipaste(&["verify", "--suite", "nope"]);
    assert_eq!(out.status.code(), Some(2));
    let err = text(&out.stderr);
    for s in runner::SUITES {
        assert!(err.contains(s), "{err}");
    }
}

#[test]
fn identity_violations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", &io::print_cubical_set(&coherator::chain(3)));
    assert_eq!(cubipaste(&["verify", "--set", &good]).status.code(), Some(0));
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{
  "max_dim": 2,
  "cells": { "0": ["x", "y"], "1": ["f"], "2": ["sq"] },
  "faces": [
    { "dim": 1, "dir": 1, "sign": "-", "from": "f", "to": "x" },
    { "dim": 1, "dir": 1, "sign": "+", "from": "f", "to": "y" },
    { "dim": 2, "dir": 1, "sign": "-", "from": "sq", "to": "f" },
    { "dim": 2, "dir": 1, "sign": "+", "from": "sq", "to": "f" },
    { "dim": 2, "dir": 2, "sign": "-", "from": "sq", "to": "f" },
    { "dim": 2, "dir": 2, "sign": "+", "from": "sq", "to": "f" }
  ]
}"#,
    );
    let out = cubipaste(&["verify", "--set", &bad]);
    assert_eq!(out.status.code(), Some(1), "{}", text(&out.stderr));
    assert!(!text(&out.stdout).contains("\"count\": 0"));
}

#[test]
fn malformed_files_report_line_and_column() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "broken.json", "{\n  \"arity\": 2,\n  \"terms\": [ oops ]\n}");
    let out = cubipaste(&["export", "--divisor", &p]);
    assert_eq!(out.status.code(), Some(2));
    let err = text(&out.stderr);
    assert!(err.contains("line 3") && err.contains("column"), "{err}");
}

#[test]
fn grid_exports() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "grid.json", &io::print_divisor(&runner::grid(&[2, 2])));
    let out = cubipaste(&["export", "--divisor", &p, "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let dot = text(&out.stdout);
    assert_eq!(dot.matches(" -> ").count(), 4);
    assert_eq!(dot.matches("[label=\"(").count(), 4);

    let empty = write(dir.path(), "empty.json", "{\"arity\": 2, \"terms\": []}");
    let out = cubipaste(&["export", "--divisor", &empty]);
    assert_eq!(text(&out.stdout), "digraph divisor {\n}\n");
}

#[test]
fn paste_operations_write_valid_divisors() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "grid.json", &io::print_divisor(&runner::grid(&[2, 1])));
    let composed = dir.path().join("composed.json").display().to_string();
    let out = cubipaste(&["paste", "compose", "--left", &p, "--right", &p, "--dir", "1", "--out", &composed]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    let x = io::parse_divisor(&std::fs::read_to_string(&composed).unwrap()).unwrap();
    assert_eq!(x.terms.len(), 4);

    let out = cubipaste(&["paste", "sigma", "--divisor", &composed, "--dir", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
    assert_eq!(io::parse_divisor(&text(&out.stdout)).unwrap().terms.len(), 4);

    let out = cubipaste(&["paste", "compose", "--left", &p, "--right", &p, "--dir", "3"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn globular_sum_of_a_chain() {
    let out = cubipaste(&["globular", "sum", "--top", "1,1,1", "--bottom", "0,0"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
}

#[test]
fn theory_and_monad_names_are_spelled_as_in_the_docs() {
    assert_eq!(cubipaste(&["monad", "check", "--which", "R"]).status.code(), Some(0));
    let out = cubipaste(&["coherator", "generate", "--theory", "W0", "--levels", "0", "--max-dim", "1", "--max-term-size", "3", "--shape", "chain2"]);
    assert_eq!(out.status.code(), Some(0), "{}", text(&out.stderr));
}
