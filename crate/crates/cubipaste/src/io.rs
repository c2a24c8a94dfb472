//! JSON file formats for cubical sets, divisors and globular trees.
//!
//! Cell identifiers in cubical-set files are names. Printing is
//! deterministic: cells in index order, faces by dimension, cell, direction
//! and sign.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::boxes::DegenerateCell;
use crate::coords::Coordinate;
use crate::cubical::{CubicalError, CubicalSet, CubicalSetBuilder, Sign};
use crate::globular::{GlobularError, GlobularTree};
use crate::pastings::{Divisor, Pasting, Terminal};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error at line {line}, column {column}: {msg}")]
    Parse { line: usize, column: usize, msg: String },
    #[error(transparent)]
    Cubical(#[from] CubicalError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Globular(#[from] GlobularError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        IoError::Parse { line: e.line(), column: e.column(), msg: e.to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceEntry {
    pub dim: usize,
    pub dir: usize,
    pub sign: Sign,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CubicalSetFile {
    pub max_dim: usize,
    pub cells: BTreeMap<String, Vec<String>>,
    pub faces: Vec<FaceEntry>,
}

impl CubicalSetFile {
    pub fn from_set(c: &CubicalSet) -> Self {
        let mut cells = BTreeMap::new();
        let mut faces = Vec::new();
        for d in 0..=c.max_dim() {
            cells.insert(d.to_string(), c.names_by_dim()[d].clone());
            for x in c.cells(d) {
                for dir in 1..=d {
                    for sign in Sign::BOTH {
                        faces.push(FaceEntry {
                            dim: d,
                            dir,
                            sign,
                            from: c.name(x).to_string(),
                            to: c.name(c.face(x, dir, sign)).to_string(),
                        });
                    }
                }
            }
        }
        CubicalSetFile { max_dim: c.max_dim(), cells, faces }
    }

    pub fn to_set(&self) -> Result<CubicalSet, IoError> {
        let set = self.to_set_unchecked()?;
        let v = set.check_identities();
        match v.first() {
            Some(first) => Err(CubicalError::Identities(v.len(), first.clone()).into()),
            None => Ok(set),
        }
    }

    /// The set as written, without checking the cubical identities.
    pub fn to_set_unchecked(&self) -> Result<CubicalSet, IoError> {
        let mut b = CubicalSetBuilder::new(self.max_dim);
        for d in 0..=self.max_dim {
            for name in self.cells.get(&d.to_string()).map(|v| v.as_slice()).unwrap_or(&[]) {
                b.add_cell(d, name)?;
            }
        }
        for k in self.cells.keys() {
            let d: usize = k.parse().map_err(|_| IoError::Invalid(format!("cell dimension `{k}` is not a number")))?;
            if d > self.max_dim {
                return Err(CubicalError::DimensionTooLarge(d, self.max_dim).into());
            }
        }
        for f in &self.faces {
            let cell = b.lookup(&f.from)?;
            if cell.dim != f.dim {
                return Err(IoError::Invalid(format!("cell `{}` has dimension {}, not {}", f.from, cell.dim, f.dim)));
            }
            b.set_face_by_name(&f.from, f.dir, f.sign, &f.to)?;
        }
        Ok(b.build_unchecked()?)
    }
}

pub fn parse_cubical_set(text: &str) -> Result<CubicalSet, IoError> {
    serde_json::from_str::<CubicalSetFile>(text)?.to_set()
}

/// Parses a cubical set whose faces may violate the identities, for reporting.
pub fn parse_cubical_set_unchecked(text: &str) -> Result<CubicalSet, IoError> {
    serde_json::from_str::<CubicalSetFile>(text)?.to_set_unchecked()
}

pub fn print_cubical_set(c: &CubicalSet) -> String {
    serde_json::to_string_pretty(&CubicalSetFile::from_set(c)).expect("serializable")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub word: String,
    pub coord: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorFile {
    pub arity: usize,
    pub terms: Vec<TermEntry>,
}

impl DivisorFile {
    pub fn from_divisor(x: &Divisor) -> Self {
        DivisorFile {
            arity: x.arity,
            terms: x
                .terms
                .iter()
                .map(|(c, t)| TermEntry {
                    word: if t.word().is_empty() { "id".into() } else { t.word().text() },
                    coord: c.0.to_vec(),
                })
                .collect(),
        }
    }

    pub fn to_divisor(&self) -> Result<Divisor, IoError> {
        let mut terms = BTreeMap::new();
        for (k, t) in self.terms.iter().enumerate() {
            if t.coord.len() != self.arity {
                return Err(IoError::Invalid(format!("term {}: coordinate has {} entries, arity is {}", k + 1, t.coord.len(), self.arity)));
            }
            let cell = DegenerateCell::parse(&t.word, self.arity)
                .map_err(|e| IoError::Invalid(format!("term {}: {e}", k + 1)))?;
            if terms.insert(Coordinate::new(&t.coord), cell).is_some() {
                return Err(IoError::Invalid(format!("term {}: duplicate coordinate", k + 1)));
            }
        }
        let x = Pasting { arity: self.arity, terms };
        if !x.is_empty() {
            x.validate(&Terminal).map_err(|e| IoError::Invalid(e.to_string()))?;
        }
        Ok(x)
    }
}

pub fn parse_divisor(text: &str) -> Result<Divisor, IoError> {
    serde_json::from_str::<DivisorFile>(text)?.to_divisor()
}

pub fn print_divisor(x: &Divisor) -> String {
    serde_json::to_string_pretty(&DivisorFile::from_divisor(x)).expect("serializable")
}

pub fn parse_tree(text: &str) -> Result<GlobularTree, IoError> {
    let t: GlobularTree = serde_json::from_str(text)?;
    t.validate()?;
    Ok(t)
}

pub fn print_tree(t: &GlobularTree) -> String {
    serde_json::to_string(t).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::standard_cube;

    #[test]
    fn cube_round_trip() {
        let c = standard_cube(2);
        assert_eq!(parse_cubical_set(&print_cubical_set(&c)).unwrap(), c);
    }

    #[test]
    fn parse_error_has_position() {
        match parse_divisor("{\"arity\": 2,\n \"terms\": [}") {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
