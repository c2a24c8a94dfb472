//! File formats, export and the runner's error surface.

use std::collections::BTreeMap;

use cubipaste::coherator;
use cubipaste::cubical::standard_cube;
use cubipaste::export::{self, Format};
use cubipaste::io::{self, IoError};
use cubipaste::reflexive::small_family;
use cubipaste::runner::{self, RunError};

#[test]
fn cubical_set_files_round_trip() {
    let mut sets = vec![standard_cube(2), standard_cube(3), coherator::chain(3)];
    sets.extend(small_family(3, 2));
    for c in &sets {
        let text = io::print_cubical_set(c);
        let back = io::parse_cubical_set(&text).unwrap();
        assert_eq!(io::print_cubical_set(&back), text);
        assert_eq!(back.counts(), c.counts());
        assert!(back.check_identities().is_empty());
    }
}

#[test]
fn parse_errors_carry_a_position() {
    let bad = "{\n  \"arity\": 2,\n  \"terms\": [ oops ]\n}";
    match io::parse_divisor(bad) {
        Err(IoError::Parse { line, column, .. }) => {
            assert_eq!(line, 3);
            assert!(column > 0);
        }
        other => panic!("expected a parse error, got {other:?}"),
    }
    assert!(matches!(io::parse_tree("[1, 2"), Err(IoError::Parse { .. })));
}

#[test]
fn malformed_cells_are_rejected() {
    // a face that breaks the cubical identities
    let text = r#"{
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
}"#;
    assert!(io::parse_cubical_set(text).is_err());
}

#[test]
fn grid_export_has_four_nodes_and_four_edges() {
    let grid = runner::grid(&[2, 2]);
    let dot = export::divisor(&grid, Format::Dot);
    assert_eq!(dot.matches("[label=\"(").count(), 4);
    assert_eq!(dot.matches(" -> ").count(), 4);
    let tikz = export::divisor(&grid, Format::Tikz);
    assert_eq!(tikz.matches("\\node").count(), 4);
    assert_eq!(tikz.matches("\\draw").count(), 4);
    assert_eq!(export::divisor(&grid, Format::Dot), dot);
}

#[test]
fn runner_rejects_unknown_names() {
    let e = runner::run_suite("nope", &BTreeMap::new(), 0, false).unwrap_err();
    assert!(matches!(e, RunError::UnknownSuite(_)));
    for s in runner::SUITES {
        assert!(e.to_string().contains(s));
    }
    let ov: BTreeMap<String, usize> = [("bogus".to_string(), 1)].into();
    assert!(matches!(runner::run_suite("cubical", &ov, 0, false), Err(RunError::UnknownBound { .. })));
}

#[test]
fn reports_do_not_depend_on_timing_flag_when_off() {
    let ov: BTreeMap<String, usize> = [("max_dim".to_string(), 2)].into();
    let a = runner::run_suite("congruence", &ov, 3, false).unwrap();
    let b = runner::run_suite("congruence", &ov, 3, false).unwrap();
    assert!(a.passed);
    assert_eq!(a.to_json(), b.to_json());
    assert!(!a.to_json().contains("wall_ms"));
    assert!(runner::run_suite("congruence", &ov, 3, true).unwrap().to_json().contains("wall_ms"));
}
