//! Text renderings of divisors and sketches as dot or TikZ.

use std::fmt::Write;

use crate::pastings::{Divisor, Terminal};
use crate::sketches::Sketch;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Dot,
    Tikz,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dot" => Ok(Format::Dot),
            "tikz" => Ok(Format::Tikz),
            _ => Err(format!("unknown format `{s}`, expected dot or tikz")),
        }
    }
}

fn label(x: &Divisor, c: &crate::coords::Coordinate) -> String {
    let w = x.terms[c].word();
    if w.is_empty() {
        "id".into()
    } else {
        w.text()
    }
}

fn node_id(c: &crate::coords::Coordinate) -> String {
    let parts: Vec<String> = c.0.iter().map(|v| v.to_string()).collect();
    format!("t{}", parts.join("_")).replace('-', "m")
}

/// One node per term and one edge per glued pair of adjacent terms.
pub fn divisor(x: &Divisor, format: Format) -> String {
    let mut edges = Vec::new();
    for j in 1..=x.arity {
        if let Ok(gl) = x.gluing_locus(&Terminal, j) {
            for g in gl {
                edges.push((j, g.left, g.right));
            }
        }
    }
    let mut out = String::new();
    match format {
        Format::Dot => {
            out.push_str("digraph divisor {\n");
            for c in x.terms.keys() {
                writeln!(out, "  {} [label=\"{} {}\"];", node_id(c), c, label(x, c)).unwrap();
            }
            for (j, a, b) in &edges {
                writeln!(out, "  {} -> {} [label=\"{}\"];", node_id(a), node_id(b), j).unwrap();
            }
            out.push_str("}\n");
        }
        Format::Tikz => {
            out.push_str("\\begin{tikzpicture}\n");
            for c in x.terms.keys() {
                let px = c.0.first().copied().unwrap_or(0);
                let py = c.0.get(1).copied().unwrap_or(0);
                writeln!(
                    out,
                    "  \\node[draw] ({}) at ({}, {}) {{${}$}};",
                    node_id(c),
                    2 * px,
                    -2 * py,
                    label(x, c)
                )
                .unwrap();
            }
            for (j, a, b) in &edges {
                writeln!(out, "  \\draw[->] ({}) -- node[midway, above] {{\\scriptsize {}}} ({});", node_id(a), j, node_id(b))
                    .unwrap();
            }
            out.push_str("\\end{tikzpicture}\n");
        }
    }
    out
}

/// Cocone graph of a sketch: objects grouped by level, each cocone drawn as
/// an edge between its legs.
pub fn sketch(s: &Sketch, format: Format) -> String {
    let obj = |o: &crate::sketches::SketchObject| format!("{}{}", o.term, o.sel);
    let id = |o: &crate::sketches::SketchObject| {
        let raw = obj(o);
        let mut h = String::from("o");
        for ch in raw.chars() {
            h.push(match ch {
                '0'..='9' | 'a'..='z' | 'A'..='Z' => ch,
                '-' => 'm',
                '+' => 'p',
                '*' => 'x',
                _ => '_',
            });
        }
        h
    };
    let mut out = String::new();
    match format {
        Format::Dot => {
            out.push_str("graph sketch {\n");
            for (p, l) in s.levels.iter().enumerate() {
                writeln!(out, "  subgraph cluster_{p} {{\n    label=\"level {p}\";").unwrap();
                for o in &l.objects {
                    writeln!(out, "    {} [label=\"{}\"];", id(o), obj(o)).unwrap();
                }
                out.push_str("  }\n");
            }
            for l in &s.levels {
                for c in &l.cocones {
                    let (a, b) = c.legs();
                    writeln!(out, "  {} -- {} [label=\"{}\"];", id(&a), id(&b), c.dir).unwrap();
                }
            }
            out.push_str("}\n");
        }
        Format::Tikz => {
            out.push_str("\\begin{tikzpicture}\n");
            for (p, l) in s.levels.iter().enumerate() {
                for (i, o) in l.objects.iter().enumerate() {
                    writeln!(out, "  \\node ({}) at ({}, {}) {{\\texttt{{{}}}}};", id(o), 3 * i, -2 * p as i64, obj(o)).unwrap();
                }
            }
            for l in &s.levels {
                for c in &l.cocones {
                    let (a, b) = c.legs();
                    writeln!(out, "  \\draw ({}) -- node[midway] {{\\scriptsize {}}} ({});", id(&a), c.dir, id(&b)).unwrap();
                }
            }
            out.push_str("\\end{tikzpicture}\n");
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::DegenerateCell;
    use crate::pastings::Pasting;

    #[test]
    fn grid_dot_counts() {
        let a = Pasting::unit(2, DegenerateCell::identity(2));
        let row = a.compose(&Terminal, &a, 1).unwrap();
        let grid = row.compose(&Terminal, &row, 2).unwrap();
        let d = divisor(&grid, Format::Dot);
        assert_eq!(d.matches("[label=\"(").count(), 4);
        assert_eq!(d.matches("->").count(), 4);
    }

    #[test]
    fn empty_divisor() {
        let x: Divisor = Pasting { arity: 2, terms: Default::default() };
        assert_eq!(divisor(&x, Format::Dot), "digraph divisor {\n}\n");
    }
}
