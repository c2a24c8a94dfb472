//! Finite cubical sets, face selectors and zigzag normalization.
//!
//! Cells are stored per dimension. A cell of dimension `n > 0` has `2n`
//! faces, indexed by direction `1..=n` and a sign.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "+")]
    Plus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Minus, Sign::Plus];

    pub fn index(self) -> usize {
        match self {
            Sign::Minus => 0,
            Sign::Plus => 1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Minus => Sign::Plus,
            Sign::Plus => Sign::Minus,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Sign::Minus => '-',
            Sign::Plus => '+',
        }
    }

    pub fn parse(c: char) -> Option<Sign> {
        match c {
            '-' => Some(Sign::Minus),
            '+' => Some(Sign::Plus),
            _ => None,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub dim: usize,
    pub idx: usize,
}

impl CellId {
    pub fn new(dim: usize, idx: usize) -> Self {
        CellId { dim, idx }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CubicalError {
    #[error("cell dimension {0} exceeds maximal dimension {1}")]
    DimensionTooLarge(usize, usize),
    #[error("duplicate cell name `{0}`")]
    DuplicateName(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("face ({dir},{sign}) of `{cell}` is missing")]
    MissingFace { cell: String, dir: usize, sign: Sign },
    #[error("face ({dir},{sign}) of `{cell}` assigned twice")]
    FaceAssignedTwice { cell: String, dir: usize, sign: Sign },
    #[error("face of `{cell}` in direction {dir} out of range")]
    DirectionOutOfRange { cell: String, dir: usize },
    #[error("face target `{target}` of `{cell}` has dimension {got}, expected {expected}")]
    WrongFaceDimension { cell: String, target: String, got: usize, expected: usize },
    #[error("{0} cubical identity violation(s), first: {1}")]
    Identities(usize, IdentityViolation),
}

/// A failure of `s^a_i s^b_j = s^b_{j-1} s^a_i` for `i < j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityViolation {
    pub cell: String,
    pub i: usize,
    pub alpha: Sign,
    pub j: usize,
    pub beta: Sign,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for IdentityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cell {}: face({},{}) after face({},{}) gives {} but the swapped side gives {}",
            self.cell, self.i, self.alpha, self.j, self.beta, self.lhs, self.rhs
        )
    }
}

/// A finite cubical set truncated at `max_dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicalSet {
    max_dim: usize,
    names: Vec<Vec<String>>,
    // faces[n][idx][dir-1][sign] = index of the face in dimension n-1
    faces: Vec<Vec<Vec<[usize; 2]>>>,
}

impl CubicalSet {
    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn count(&self, dim: usize) -> usize {
        self.names.get(dim).map_or(0, |v| v.len())
    }

    pub fn counts(&self) -> Vec<usize> {
        (0..=self.max_dim).map(|d| self.count(d)).collect()
    }

    pub fn total(&self) -> usize {
        self.counts().iter().sum()
    }

    pub fn name(&self, c: CellId) -> &str {
        &self.names[c.dim][c.idx]
    }

    pub fn cells(&self, dim: usize) -> impl Iterator<Item = CellId> + '_ {
        (0..self.count(dim)).map(move |idx| CellId { dim, idx })
    }

    pub fn all_cells(&self) -> impl Iterator<Item = CellId> + '_ {
        (0..=self.max_dim).flat_map(move |d| self.cells(d))
    }

    pub fn find(&self, name: &str) -> Option<CellId> {
        for (d, v) in self.names.iter().enumerate() {
            if let Some(i) = v.iter().position(|n| n == name) {
                return Some(CellId::new(d, i));
            }
        }
        None
    }

    /// Face in direction `dir` (1-based) with sign `sign`.
    pub fn face(&self, c: CellId, dir: usize, sign: Sign) -> CellId {
        assert!(dir >= 1 && dir <= c.dim, "face direction {dir} out of range for dim {}", c.dim);
        CellId::new(c.dim - 1, self.faces[c.dim][c.idx][dir - 1][sign.index()])
    }

    pub fn apply_selector(&self, c: CellId, sel: &FaceSelector) -> CellId {
        assert_eq!(sel.ambient, c.dim, "selector ambient dimension mismatch");
        let mut cur = c;
        for (&dir, &s) in sel.assign.iter().rev() {
            cur = self.face(cur, dir, s);
        }
        cur
    }

    pub fn check_identities(&self) -> Vec<IdentityViolation> {
        let mut out = Vec::new();
        for n in 2..=self.max_dim {
            for x in self.cells(n) {
                for j in 2..=n {
                    for i in 1..j {
                        for &a in &Sign::BOTH {
                            for &b in &Sign::BOTH {
                                let lhs = self.face(self.face(x, j, b), i, a);
                                let rhs = self.face(self.face(x, i, a), j - 1, b);
                                if lhs != rhs {
                                    out.push(IdentityViolation {
                                        cell: self.name(x).to_string(),
                                        i,
                                        alpha: a,
                                        j,
                                        beta: b,
                                        lhs: self.name(lhs).to_string(),
                                        rhs: self.name(rhs).to_string(),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Raw face table access for serialization.
    pub fn face_table(&self, c: CellId) -> &[[usize; 2]] {
        &self.faces[c.dim][c.idx]
    }

    /// Builds from raw tables without validating identities.
    pub fn from_tables(
        max_dim: usize,
        names: Vec<Vec<String>>,
        faces: Vec<Vec<Vec<[usize; 2]>>>,
    ) -> Self {
        let mut names = names;
        let mut faces = faces;
        names.resize(max_dim + 1, Vec::new());
        faces.resize(max_dim + 1, Vec::new());
        CubicalSet { max_dim, names, faces }
    }

    pub fn names_by_dim(&self) -> &[Vec<String>] {
        &self.names
    }

    pub fn truncate(&self, dim: usize) -> CubicalSet {
        let d = dim.min(self.max_dim);
        CubicalSet {
            max_dim: dim,
            names: (0..=dim).map(|k| if k <= d { self.names[k].clone() } else { Vec::new() }).collect(),
            faces: (0..=dim).map(|k| if k <= d { self.faces[k].clone() } else { Vec::new() }).collect(),
        }
    }
}

/// Incremental construction. Structural errors are reported on `build`
/// separately from identity violations.
#[derive(Debug, Clone)]
pub struct CubicalSetBuilder {
    max_dim: usize,
    names: Vec<Vec<String>>,
    faces: Vec<Vec<Vec<[Option<usize>; 2]>>>,
    index: HashMap<String, CellId>,
}

impl CubicalSetBuilder {
    pub fn new(max_dim: usize) -> Self {
        CubicalSetBuilder {
            max_dim,
            names: vec![Vec::new(); max_dim + 1],
            faces: vec![Vec::new(); max_dim + 1],
            index: HashMap::new(),
        }
    }

    pub fn add_cell(&mut self, dim: usize, name: &str) -> Result<CellId, CubicalError> {
        if dim > self.max_dim {
            return Err(CubicalError::DimensionTooLarge(dim, self.max_dim));
        }
        if self.index.contains_key(name) {
            return Err(CubicalError::DuplicateName(name.to_string()));
        }
        let id = CellId::new(dim, self.names[dim].len());
        self.names[dim].push(name.to_string());
        self.faces[dim].push(vec![[None, None]; dim]);
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Result<CellId, CubicalError> {
        self.index.get(name).copied().ok_or_else(|| CubicalError::UnknownCell(name.to_string()))
    }

    pub fn set_face(&mut self, cell: CellId, dir: usize, sign: Sign, target: CellId) -> Result<(), CubicalError> {
        let cname = self.names[cell.dim][cell.idx].clone();
        if dir == 0 || dir > cell.dim {
            return Err(CubicalError::DirectionOutOfRange { cell: cname, dir });
        }
        if target.dim + 1 != cell.dim {
            return Err(CubicalError::WrongFaceDimension {
                cell: cname,
                target: self.names[target.dim][target.idx].clone(),
                got: target.dim,
                expected: cell.dim - 1,
            });
        }
        let slot = &mut self.faces[cell.dim][cell.idx][dir - 1][sign.index()];
        if slot.is_some() {
            return Err(CubicalError::FaceAssignedTwice { cell: cname, dir, sign });
        }
        *slot = Some(target.idx);
        Ok(())
    }

    pub fn set_face_by_name(&mut self, cell: &str, dir: usize, sign: Sign, target: &str) -> Result<(), CubicalError> {
        let c = self.lookup(cell)?;
        let t = self.lookup(target)?;
        self.set_face(c, dir, sign, t)
    }

    /// Builds the set, checking structure only.
    pub fn build_unchecked(self) -> Result<CubicalSet, CubicalError> {
        let mut faces = Vec::with_capacity(self.max_dim + 1);
        for (n, per) in self.faces.iter().enumerate() {
            let mut v = Vec::with_capacity(per.len());
            for (idx, tab) in per.iter().enumerate() {
                let mut row = Vec::with_capacity(n);
                for (d, pair) in tab.iter().enumerate() {
                    let mut out = [0usize; 2];
                    for s in Sign::BOTH {
                        out[s.index()] = pair[s.index()].ok_or_else(|| CubicalError::MissingFace {
                            cell: self.names[n][idx].clone(),
                            dir: d + 1,
                            sign: s,
                        })?;
                    }
                    row.push(out);
                }
                v.push(row);
            }
            faces.push(v);
        }
        Ok(CubicalSet { max_dim: self.max_dim, names: self.names, faces })
    }

    /// Builds the set and rejects identity violations.
    pub fn build(self) -> Result<CubicalSet, CubicalError> {
        let set = self.build_unchecked()?;
        let v = set.check_identities();
        if let Some(first) = v.first() {
            return Err(CubicalError::Identities(v.len(), first.clone()));
        }
        Ok(set)
    }
}

/// A partial assignment of signs to directions of an `ambient`-cube.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FaceSelector {
    pub ambient: usize,
    pub assign: BTreeMap<usize, Sign>,
}

impl FaceSelector {
    pub fn identity(ambient: usize) -> Self {
        FaceSelector { ambient, assign: BTreeMap::new() }
    }

    pub fn single(ambient: usize, dir: usize, sign: Sign) -> Self {
        let mut s = Self::identity(ambient);
        s.assign.insert(dir, sign);
        s
    }

    pub fn residual(&self) -> usize {
        self.ambient - self.assign.len()
    }

    /// Pattern over `{-,+,*}`, one character per direction.
    pub fn pattern(&self) -> String {
        (1..=self.ambient)
            .map(|d| self.assign.get(&d).map_or('*', |s| s.symbol()))
            .collect()
    }

    pub fn from_pattern(p: &str) -> Option<Self> {
        let mut s = Self::identity(p.chars().count());
        for (i, c) in p.chars().enumerate() {
            match c {
                '*' => {}
                _ => {
                    s.assign.insert(i + 1, Sign::parse(c)?);
                }
            }
        }
        Some(s)
    }

    /// Directions left free, in increasing order.
    pub fn free_dirs(&self) -> Vec<usize> {
        (1..=self.ambient).filter(|d| !self.assign.contains_key(d)).collect()
    }

    /// Selector obtained by first applying `self`, then `inner` on the residual cube.
    pub fn then(&self, inner: &FaceSelector) -> FaceSelector {
        assert_eq!(inner.ambient, self.residual());
        let free = self.free_dirs();
        let mut out = self.clone();
        for (&d, &s) in &inner.assign {
            out.assign.insert(free[d - 1], s);
        }
        out
    }

    /// All selectors of an `n`-cube, ordered by pattern.
    pub fn all(n: usize) -> Vec<FaceSelector> {
        let mut out = vec![FaceSelector::identity(n)];
        for d in 1..=n {
            let mut next = Vec::with_capacity(out.len() * 3);
            for s in &out {
                next.push(s.clone());
                for sg in Sign::BOTH {
                    let mut t = s.clone();
                    t.assign.insert(d, sg);
                    next.push(t);
                }
            }
            out = next;
        }
        out.sort();
        out
    }

    pub fn with_residual(n: usize, q: usize) -> Vec<FaceSelector> {
        Self::all(n).into_iter().filter(|s| s.residual() == q).collect()
    }
}

impl fmt::Display for FaceSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.pattern())
    }
}

/// The standard `n`-cube: cells are patterns over `{-,+,*}`.
pub fn standard_cube(n: usize) -> CubicalSet {
    let mut b = CubicalSetBuilder::new(n);
    let sels = FaceSelector::all(n);
    let mut by_res: Vec<Vec<&FaceSelector>> = vec![Vec::new(); n + 1];
    for s in &sels {
        by_res[s.residual()].push(s);
    }
    for (d, list) in by_res.iter().enumerate() {
        for s in list {
            b.add_cell(d, &s.to_string()).expect("fresh names");
        }
    }
    for list in by_res.iter().skip(1) {
        for s in list {
            let c = b.lookup(&s.to_string()).unwrap();
            for dir in 1..=s.residual() {
                for sg in Sign::BOTH {
                    let t = s.then(&FaceSelector::single(s.residual(), dir, sg));
                    let tc = b.lookup(&t.to_string()).unwrap();
                    b.set_face(c, dir, sg, tc).unwrap();
                }
            }
        }
    }
    b.build().expect("standard cube satisfies the identities")
}

/// Sorts a sequence of face operations, given in application order as
/// `(direction at time of application, sign)`, into the canonical selector.
/// Returns `None` if a direction is out of range.
pub fn normalize_zigzag(n: usize, steps: &[(usize, Sign)]) -> Option<FaceSelector> {
    let mut remaining: Vec<usize> = (1..=n).collect();
    let mut sel = FaceSelector::identity(n);
    for &(d, s) in steps {
        if d == 0 || d > remaining.len() {
            return None;
        }
        let orig = remaining.remove(d - 1);
        sel.assign.insert(orig, s);
    }
    Some(sel)
}

/// Converts a canonical selector back into steps applied in descending direction order.
pub fn selector_steps(sel: &FaceSelector) -> Vec<(usize, Sign)> {
    sel.assign.iter().rev().map(|(&d, &s)| (d, s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_counts() {
        let c = standard_cube(3);
        assert_eq!(c.counts(), vec![8, 12, 6, 1]);
        assert!(c.check_identities().is_empty());
    }

    #[test]
    fn zigzag_example() {
        let s = normalize_zigzag(3, &[(1, Sign::Minus), (1, Sign::Plus)]).unwrap();
        assert_eq!(s.pattern(), "-+*");
        let t = normalize_zigzag(3, &[(2, Sign::Plus), (1, Sign::Minus)]).unwrap();
        assert_eq!(t.pattern(), "-+*");
    }

    #[test]
    fn builder_reports_missing_face() {
        let mut b = CubicalSetBuilder::new(1);
        b.add_cell(0, "v").unwrap();
        let e = b.add_cell(1, "e").unwrap();
        let v = b.lookup("v").unwrap();
        b.set_face(e, 1, Sign::Minus, v).unwrap();
        assert!(matches!(b.build(), Err(CubicalError::MissingFace { .. })));
    }
}
