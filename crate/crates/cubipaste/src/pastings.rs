//! Pastings: configurations whose coordinates carry cells.
//!
//! Everything here is generic over a [`CellAlgebra`], which supplies faces
//! and degeneracies of the decorating cells. Divisors are pastings of
//! degenerate cells of the terminal set; decorations over a cubical set use
//! the cells of its free reflexive extension.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

use crate::boxes::DegenerateCell;
use crate::coords::{Configuration, CoordError, Coordinate};
use crate::cubical::Sign;
use crate::words::{Letter, LetterKind};

pub trait CellAlgebra {
    type Cell: Clone + Ord + Hash + Debug;
    fn dim(&self, c: &Self::Cell) -> usize;
    fn face(&self, c: &Self::Cell, dir: usize, sign: Sign) -> Self::Cell;
    /// `None` when the algebra has no such operation.
    fn degenerate(&self, c: &Self::Cell, l: Letter) -> Option<Self::Cell>;
    fn render(&self, c: &Self::Cell) -> String;
}

/// Cells of the terminal reflexive set.
#[derive(Clone, Copy, Debug, Default)]
pub struct Terminal;

impl CellAlgebra for Terminal {
    type Cell = DegenerateCell;
    fn dim(&self, c: &DegenerateCell) -> usize {
        c.dim()
    }
    fn face(&self, c: &DegenerateCell, dir: usize, sign: Sign) -> DegenerateCell {
        c.face(dir, sign)
    }
    fn degenerate(&self, c: &DegenerateCell, l: Letter) -> Option<DegenerateCell> {
        Some(c.apply(l))
    }
    fn render(&self, c: &DegenerateCell) -> String {
        c.word().to_string()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PasteError {
    #[error(transparent)]
    Coord(#[from] CoordError),
    #[error("cell at {coord} has dimension {got}, expected {expected}")]
    CellDimension { coord: Coordinate, got: usize, expected: usize },
    #[error("cells at {left} and {right} do not share their face in direction {dir}")]
    Incompatible { left: Coordinate, right: Coordinate, dir: usize },
    #[error("pasting is not rectangular")]
    NotRectangular,
    #[error("pasting is empty")]
    Empty,
    #[error("arity-0 pasting has no faces")]
    NoFaces,
    #[error("letter {letter} out of range for arity {arity}")]
    LetterOutOfRange { letter: String, arity: usize },
    #[error("cells do not support {0}")]
    Unsupported(String),
    #[error("composition in direction {0} undefined: boundaries differ")]
    BoundaryMismatch(usize),
}

/// Record of two `j`-adjacent terms and their shared face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GluingRecord<T> {
    pub left: Coordinate,
    pub right: Coordinate,
    pub shared: T,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pasting<T> {
    pub arity: usize,
    pub terms: BTreeMap<Coordinate, T>,
}

pub type Divisor = Pasting<DegenerateCell>;

/// Componentwise bounds of a coordinate set.
type Extent = smallvec::SmallVec<[i64; 4]>;

impl<T: Clone + Ord + Hash + Debug> Pasting<T> {
    pub fn singleton(coord: Coordinate, cell: T) -> Self {
        Pasting { arity: coord.arity(), terms: [(coord, cell)].into_iter().collect() }
    }

    pub fn unit(arity: usize, cell: T) -> Self {
        Self::singleton(Coordinate::from(vec![1; arity]), cell)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn configuration(&self) -> Configuration {
        Configuration { arity: self.arity, coords: self.terms.keys().cloned().collect() }
    }

    pub fn translate(&self, offset: &[i64]) -> Self {
        Pasting { arity: self.arity, terms: self.terms.iter().map(|(c, t)| (c.shifted(offset), t.clone())).collect() }
    }

    pub fn normalized(&self) -> Self {
        match self.bounds() {
            Some((lo, _)) if lo.iter().all(|&v| v == 1) => self.clone(),
            Some((lo, _)) => self.translate(&lo.iter().map(|v| 1 - v).collect::<Vec<_>>()),
            None => self.clone(),
        }
    }

    /// Like `normalized`, reusing the terms when they are already in place.
    pub fn into_normalized(self) -> Self {
        match self.bounds() {
            Some((lo, _)) if lo.iter().any(|&v| v != 1) => {
                let offset: Vec<i64> = lo.iter().map(|v| 1 - v).collect();
                self.translate(&offset)
            }
            _ => self,
        }
    }

    /// Componentwise minimum and maximum of the coordinates.
    fn bounds(&self) -> Option<(Extent, Extent)> {
        let mut it = self.terms.keys();
        let first = it.next()?;
        let (mut lo, mut hi) = (Extent::from_slice(&first.0), Extent::from_slice(&first.0));
        let (l, h) = (lo.as_mut_slice(), hi.as_mut_slice());
        for c in it {
            for ((a, b), &v) in l.iter_mut().zip(h.iter_mut()).zip(c.0.as_slice()) {
                *a = (*a).min(v);
                *b = (*b).max(v);
            }
        }
        Some((lo, hi))
    }

    /// Bounds of a rectangular pasting.
    fn rect_bounds(&self) -> Option<(Extent, Extent)> {
        let (lo, hi) = self.bounds()?;
        let vol: i64 = lo.iter().zip(&hi).map(|(a, b)| b - a + 1).product();
        (vol == self.terms.len() as i64).then_some((lo, hi))
    }

    pub fn equivalent(&self, other: &Self) -> bool {
        if self.arity != other.arity || self.terms.len() != other.terms.len() {
            return false;
        }
        let (Some((la, _)), Some((lb, _))) = (self.bounds(), other.bounds()) else {
            return self.terms.is_empty() && other.terms.is_empty();
        };
        // translation keeps the lexicographic order, so terms pair up in order
        self.terms.iter().zip(&other.terms).all(|((ca, ta), (cb, tb))| {
            ta == tb && ca.0.iter().zip(&la).zip(cb.0.iter().zip(&lb)).all(|((a, x), (b, y))| a - x == b - y)
        })
    }

    pub fn is_rectangular(&self) -> bool {
        self.rect_bounds().is_some()
    }

    pub fn extents(&self) -> Vec<usize> {
        match self.bounds() {
            Some((lo, hi)) => lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).collect(),
            None => vec![0; self.arity],
        }
    }

    /// Terms whose depth in direction `j` lies in `lo..=hi`.
    pub fn slice(&self, j: usize, lo: i64, hi: i64) -> Self {
        Pasting {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter(|(c, _)| c.0[j - 1] >= lo && c.0[j - 1] <= hi)
                .map(|(c, t)| (c.clone(), t.clone()))
                .collect(),
        }
    }

    pub fn map_cells<U>(&self, f: impl Fn(&T) -> U) -> Pasting<U> {
        Pasting { arity: self.arity, terms: self.terms.iter().map(|(c, t)| (c.clone(), f(t))).collect() }
    }

    /// Checks term dimensions and that consecutive terms of every partition
    /// share their faces.
    pub fn validate<A: CellAlgebra<Cell = T>>(&self, alg: &A) -> Result<(), PasteError> {
        for (c, t) in &self.terms {
            if c.arity() != self.arity {
                return Err(CoordError::ArityMismatch(c.arity(), self.arity).into());
            }
            if alg.dim(t) != self.arity {
                return Err(PasteError::CellDimension { coord: c.clone(), got: alg.dim(t), expected: self.arity });
            }
        }
        if let Some((_, hi)) = self.rect_bounds() {
            // neighbours in a box are one step apart
            for (c, t) in &self.terms {
                for j in 1..=self.arity {
                    if c.0[j - 1] == hi[j - 1] {
                        continue;
                    }
                    let mut r = c.clone();
                    r.0[j - 1] += 1;
                    if alg.face(t, j, Sign::Plus) != alg.face(&self.terms[&r], j, Sign::Minus) {
                        return Err(PasteError::Incompatible { left: c.clone(), right: r, dir: j });
                    }
                }
            }
            return Ok(());
        }
        for j in 1..=self.arity {
            for (l, r) in self.consecutive_pairs(j) {
                if alg.face(&self.terms[&l], j, Sign::Plus) != alg.face(&self.terms[&r], j, Sign::Minus) {
                    return Err(PasteError::Incompatible { left: l, right: r, dir: j });
                }
            }
        }
        Ok(())
    }

    fn consecutive_pairs(&self, j: usize) -> Vec<(Coordinate, Coordinate)> {
        let conf = self.configuration();
        let mut out = Vec::new();
        for part in conf.partitions(j).expect("direction in range").values() {
            let v: Vec<&Coordinate> = part.iter().collect();
            let mut v = v;
            v.sort_by_key(|c| c.0[j - 1]);
            for w in v.windows(2) {
                out.push((w[0].clone(), w[1].clone()));
            }
        }
        out
    }

    pub fn gluing_locus<A: CellAlgebra<Cell = T>>(&self, alg: &A, j: usize) -> Result<Vec<GluingRecord<T>>, PasteError> {
        check_dir(j, self.arity)?;
        Ok(self
            .consecutive_pairs(j)
            .into_iter()
            .map(|(l, r)| {
                let shared = alg.face(&self.terms[&l], j, Sign::Plus);
                GluingRecord { left: l, right: r, shared }
            })
            .collect())
    }

    /// Terms without a predecessor (resp. successor) in direction `j`, with
    /// their source (resp. target) face.
    pub fn free_loci<A: CellAlgebra<Cell = T>>(
        &self,
        alg: &A,
        j: usize,
    ) -> Result<(Vec<(Coordinate, T)>, Vec<(Coordinate, T)>), PasteError> {
        check_dir(j, self.arity)?;
        let conf = self.configuration();
        let src = conf.pre_source(j)?;
        let tgt = conf.pre_target(j)?;
        let pick = |cs: &Configuration, s: Sign| {
            cs.coords.iter().map(|c| (c.clone(), alg.face(&self.terms[c], j, s))).collect::<Vec<_>>()
        };
        Ok((pick(&src, Sign::Minus), pick(&tgt, Sign::Plus)))
    }

    /// Termwise face: a formal sum, coordinates may repeat.
    pub fn face_terms<A: CellAlgebra<Cell = T>>(
        &self,
        alg: &A,
        j: usize,
        sign: Sign,
    ) -> Result<Vec<(Coordinate, T)>, PasteError> {
        if self.arity == 0 {
            return Err(PasteError::NoFaces);
        }
        check_dir(j, self.arity)?;
        Ok(self.terms.iter().map(|(c, t)| (c.contract(j).unwrap(), alg.face(t, j, sign))).collect())
    }

    fn boundary<A: CellAlgebra<Cell = T>>(&self, alg: &A, j: usize, sign: Sign) -> Result<Self, PasteError> {
        if self.arity == 0 {
            return Err(PasteError::NoFaces);
        }
        if self.is_empty() {
            return Err(PasteError::Empty);
        }
        check_dir(j, self.arity)?;
        if let Some((lo, hi)) = self.rect_bounds() {
            let at = match sign {
                Sign::Minus => lo[j - 1],
                Sign::Plus => hi[j - 1],
            };
            return Ok(Pasting {
                arity: self.arity - 1,
                terms: self
                    .terms
                    .iter()
                    .filter(|(c, _)| c.0[j - 1] == at)
                    .map(|(c, t)| (c.contract(j).unwrap(), alg.face(t, j, sign)))
                    .collect(),
            });
        }
        let conf = self.configuration();
        let pre = match sign {
            Sign::Minus => conf.pre_source(j)?,
            Sign::Plus => conf.pre_target(j)?,
        };
        Ok(Pasting {
            arity: self.arity - 1,
            terms: pre.coords.iter().map(|c| (c.contract(j).unwrap(), alg.face(&self.terms[c], j, sign))).collect(),
        })
    }

    pub fn pasting_source<A: CellAlgebra<Cell = T>>(&self, alg: &A, j: usize) -> Result<Self, PasteError> {
        self.boundary(alg, j, Sign::Minus)
    }

    pub fn pasting_target<A: CellAlgebra<Cell = T>>(&self, alg: &A, j: usize) -> Result<Self, PasteError> {
        self.boundary(alg, j, Sign::Plus)
    }

    pub fn pasting_face<A: CellAlgebra<Cell = T>>(&self, alg: &A, j: usize, sign: Sign) -> Result<Self, PasteError> {
        self.boundary(alg, j, sign)
    }

    /// Places `next` after `self` in direction `j`.
    pub fn compose<A: CellAlgebra<Cell = T>>(&self, alg: &A, next: &Self, j: usize) -> Result<Self, PasteError> {
        check_dir(j, self.arity)?;
        if next.arity != self.arity {
            return Err(CoordError::ArityMismatch(self.arity, next.arity).into());
        }
        if let (Some((alo, ahi)), Some((blo, bhi))) = (self.rect_bounds(), next.rect_bounds()) {
            return self.compose_rectangular(alg, next, j, (&alo, &ahi), (&blo, &bhi));
        }
        let t = self.pasting_target(alg, j)?;
        let s = next.pasting_source(alg, j)?;
        if !t.equivalent(&s) {
            return Err(PasteError::BoundaryMismatch(j));
        }
        let moves = self.configuration().composition_moves(&next.configuration(), j).map_err(|e| match e {
            CoordError::BoundaryMismatch(d) => PasteError::BoundaryMismatch(d),
            e => e.into(),
        })?;
        let mut terms = self.terms.clone();
        for (from, to) in moves {
            if terms.insert(to.clone(), next.terms[&from].clone()).is_some() {
                return Err(CoordError::Overlap(to).into());
            }
        }
        Ok(Pasting { arity: self.arity, terms })
    }

    fn compose_rectangular<A: CellAlgebra<Cell = T>>(
        &self,
        alg: &A,
        next: &Self,
        j: usize,
        (alo, ahi): (&[i64], &[i64]),
        (blo, bhi): (&[i64], &[i64]),
    ) -> Result<Self, PasteError> {
        let k = j - 1;
        for d in 0..self.arity {
            if d != k && ahi[d] - alo[d] != bhi[d] - blo[d] {
                return Err(PasteError::BoundaryMismatch(j));
            }
        }
        // offset taking `next` into place after `self`
        let offset: Vec<i64> =
            (0..self.arity).map(|d| if d == k { ahi[k] + 1 - blo[k] } else { alo[d] - blo[d] }).collect();
        let mut terms = self.terms.clone();
        for (c, t) in &next.terms {
            let moved = c.shifted(&offset);
            if moved.0[k] == ahi[k] + 1 {
                let mut prev = moved.clone();
                prev.0[k] = ahi[k];
                if alg.face(&self.terms[&prev], j, Sign::Plus) != alg.face(t, j, Sign::Minus) {
                    return Err(PasteError::BoundaryMismatch(j));
                }
            }
            terms.insert(moved, t.clone());
        }
        Ok(Pasting { arity: self.arity, terms })
    }

    fn check_letter(&self, l: Letter) -> Result<(), PasteError> {
        if !l.valid_on(self.arity) {
            return Err(PasteError::LetterOutOfRange { letter: l.to_string(), arity: self.arity });
        }
        Ok(())
    }

    fn degen_cell<A: CellAlgebra<Cell = T>>(alg: &A, t: &T, l: Letter) -> Result<T, PasteError> {
        alg.degenerate(t, l).ok_or_else(|| PasteError::Unsupported(l.to_string()))
    }

    /// Degeneracy of a rectangular pasting, in closed form.
    pub fn degenerate<A: CellAlgebra<Cell = T>>(&self, alg: &A, l: Letter) -> Result<Self, PasteError> {
        self.check_letter(l)?;
        let Some((lo, hi)) = self.rect_bounds() else {
            return Err(PasteError::NotRectangular);
        };
        let i = l.index;
        let mut terms = BTreeMap::new();
        match l.kind {
            LetterKind::Degeneracy => {
                for (c, t) in &self.terms {
                    terms.insert(c.dilate(i)?, Self::degen_cell(alg, t, l)?);
                }
            }
            LetterKind::Connection(g) => {
                let (lo, hi) = (lo[i - 1], hi[i - 1]);
                // each term at depth r fills the diagonal cell (r, r), one
                // half-row with e_{i+1} of itself and one half-column with e_i
                let mut out = Vec::with_capacity(self.terms.len() * (hi - lo + 1) as usize);
                for (c, t) in &self.terms {
                    let r = c.0[i - 1];
                    let at = |p: i64, q: i64| {
                        let mut v = c.0.clone();
                        v[i - 1] = q;
                        v.insert(i - 1, p);
                        Coordinate(v)
                    };
                    out.push((at(r, r), Self::degen_cell(alg, t, l)?));
                    let row = Self::degen_cell(alg, t, Letter::deg(i + 1))?;
                    let col = Self::degen_cell(alg, t, Letter::deg(i))?;
                    let span = match g {
                        Sign::Plus => r + 1..=hi,
                        Sign::Minus => lo..=r - 1,
                    };
                    for q in span.clone() {
                        out.push((at(r, q), row.clone()));
                    }
                    for p in span {
                        out.push((at(p, r), col.clone()));
                    }
                }
                terms.extend(out);
            }
        }
        Ok(Pasting { arity: self.arity + 1, terms })
    }

    /// Degeneracy computed by splitting along directions in `order` and
    /// applying the transport laws to each split.
    pub fn degenerate_by_splitting<A: CellAlgebra<Cell = T>>(
        &self,
        alg: &A,
        l: Letter,
        order: &[usize],
    ) -> Result<Self, PasteError> {
        self.check_letter(l)?;
        if !self.is_rectangular() {
            return Err(PasteError::NotRectangular);
        }
        let x = self.normalized();
        if x.len() == 1 {
            return x.degenerate(alg, l);
        }
        let ext = x.extents();
        let d = order
            .iter()
            .copied()
            .chain(1..=x.arity)
            .find(|&d| d <= x.arity && ext[d - 1] > 1)
            .expect("some direction has extent above one");
        let len = ext[d - 1] as i64;
        let i = l.index;
        if let (LetterKind::Connection(g), true) = (l.kind, d == i) {
            let eo = Letter::deg(i);
            let ei = Letter::deg(i + 1);
            let (top, bottom) = match g {
                Sign::Plus => {
                    let a = x.slice(i, 1, len - 1);
                    let b = x.slice(i, len, len);
                    let top = a.degenerate_by_splitting(alg, l, order)?.compose(
                        alg,
                        &a.degenerate_by_splitting(alg, eo, order)?,
                        i,
                    )?;
                    let bottom = a.degenerate_by_splitting(alg, ei, order)?.compose(
                        alg,
                        &b.degenerate_by_splitting(alg, l, order)?,
                        i,
                    )?;
                    (top, bottom)
                }
                Sign::Minus => {
                    let a = x.slice(i, 1, 1);
                    let b = x.slice(i, 2, len);
                    let top = a.degenerate_by_splitting(alg, l, order)?.compose(
                        alg,
                        &b.degenerate_by_splitting(alg, ei, order)?,
                        i,
                    )?;
                    let bottom = b.degenerate_by_splitting(alg, eo, order)?.compose(
                        alg,
                        &b.degenerate_by_splitting(alg, l, order)?,
                        i,
                    )?;
                    (top, bottom)
                }
            };
            return top.compose(alg, &bottom, i + 1).map(Self::into_normalized);
        }
        let a = x.slice(d, 1, 1);
        let b = x.slice(d, 2, len);
        let d2 = if d < i { d } else { d + 1 };
        let out = a
            .degenerate_by_splitting(alg, l, order)?
            .compose(alg, &b.degenerate_by_splitting(alg, l, order)?, d2)?;
        Ok(out.into_normalized())
    }

    /// Removes slices made of cells degenerate in the slicing direction,
    /// keeping one slice per direction. Composites that differ by unit
    /// factors get the same normal form.
    pub fn collapse_units<A: CellAlgebra<Cell = T>>(&self, alg: &A) -> Self {
        let mut x = self.normalized();
        for j in 1..=x.arity {
            let len = x.extents()[j - 1];
            let mut unit = vec![true; len];
            for (c, t) in &x.terms {
                let k = (c.0[j - 1] - 1) as usize;
                if unit[k] && alg.degenerate(&alg.face(t, j, Sign::Minus), Letter::deg(j)).as_ref() != Some(t) {
                    unit[k] = false;
                }
            }
            if unit.iter().all(|&u| u) {
                unit[0] = false;
            }
            if unit.iter().all(|&u| !u) {
                continue;
            }
            // new depth of each kept slice
            let mut depth = vec![0i64; len];
            let mut next = 0;
            for k in 0..len {
                if !unit[k] {
                    next += 1;
                    depth[k] = next;
                }
            }
            let terms = std::mem::take(&mut x.terms)
                .into_iter()
                .filter(|(c, _)| !unit[(c.0[j - 1] - 1) as usize])
                .map(|(mut c, t)| {
                    c.0[j - 1] = depth[(c.0[j - 1] - 1) as usize];
                    (c, t)
                })
                .collect();
            x.terms = terms;
        }
        x
    }

    pub fn render<A: CellAlgebra<Cell = T>>(&self, alg: &A) -> String {
        let v: Vec<String> = self.terms.iter().map(|(c, t)| format!("{}{}", alg.render(t), c)).collect();
        v.join(" + ")
    }
}

fn check_dir(j: usize, arity: usize) -> Result<(), PasteError> {
    if j == 0 || j > arity {
        Err(CoordError::DirectionOutOfRange { dir: j, arity }.into())
    } else {
        Ok(())
    }
}

/// All extent vectors of length `n` with product at most `size`.
pub fn shapes(n: usize, size: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for s in &out {
            let p: usize = s.iter().product();
            for e in 1..=size {
                if p * e <= size {
                    let mut t = s.clone();
                    t.push(e);
                    next.push(t);
                }
            }
        }
        out = next;
    }
    out
}

/// All rectangular pastings of arity `n` with at most `size` terms, whose
/// cells are drawn from `cells` (all of dimension `n`). Normalized, sorted.
pub fn enumerate_rectangular<A: CellAlgebra>(alg: &A, cells: &[A::Cell], n: usize, size: usize) -> Vec<Pasting<A::Cell>> {
    let mut out = Vec::new();
    for shape in shapes(n, size) {
        let coords: Vec<Coordinate> = Configuration::grid(&shape).coords.into_iter().collect();
        fill_shape(alg, cells, n, &coords, &mut BTreeMap::new(), &mut out);
    }
    out.sort();
    out
}

/// All decorations of the given coordinates (sorted lexicographically) by
/// compatible cells.
pub fn fill_shape<A: CellAlgebra>(
    alg: &A,
    cells: &[A::Cell],
    n: usize,
    coords: &[Coordinate],
    acc: &mut BTreeMap<Coordinate, A::Cell>,
    out: &mut Vec<Pasting<A::Cell>>,
) {
    fill_shape_with(alg, &|_| cells.to_vec(), n, coords, acc, out)
}

/// Like [`fill_shape`] with per-coordinate candidate lists.
pub fn fill_shape_with<A: CellAlgebra>(
    alg: &A,
    cands: &dyn Fn(&Coordinate) -> Vec<A::Cell>,
    n: usize,
    coords: &[Coordinate],
    acc: &mut BTreeMap<Coordinate, A::Cell>,
    out: &mut Vec<Pasting<A::Cell>>,
) {
    let k = acc.len();
    if k == coords.len() {
        out.push(Pasting { arity: n, terms: acc.clone() });
        return;
    }
    let c = &coords[k];
    'cand: for cell in cands(c) {
        for j in 1..=n {
            let mut prev = c.clone();
            prev.0[j - 1] -= 1;
            if let Some(p) = acc.get(&prev) {
                if alg.face(p, j, Sign::Plus) != alg.face(&cell, j, Sign::Minus) {
                    continue 'cand;
                }
            }
        }
        acc.insert(c.clone(), cell);
        fill_shape_with(alg, cands, n, coords, acc, out);
        acc.remove(c);
    }
}

/// Closure of singleton pastings under composition, within bounds.
pub fn composition_closure<A: CellAlgebra>(alg: &A, cells: &[A::Cell], n: usize, size: usize) -> Vec<Pasting<A::Cell>> {
    let mut all: BTreeSet<Pasting<A::Cell>> = cells.iter().map(|c| Pasting::unit(n, c.clone())).collect();
    loop {
        let cur: Vec<_> = all.iter().cloned().collect();
        let mut grew = false;
        for a in &cur {
            for b in &cur {
                if a.len() + b.len() > size {
                    continue;
                }
                for j in 1..=n {
                    if let Ok(c) = a.compose(alg, b, j) {
                        if all.insert(c.normalized()) {
                            grew = true;
                        }
                    }
                }
            }
        }
        if !grew {
            break;
        }
    }
    all.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(n: usize) -> DegenerateCell {
        DegenerateCell::identity(n)
    }

    #[test]
    fn chain_and_connection() {
        let a = Divisor::unit(1, id(1));
        let ab = a.compose(&Terminal, &a, 1).unwrap();
        assert_eq!(ab.len(), 2);
        let g = ab.degenerate(&Terminal, Letter::conn(Sign::Plus, 1)).unwrap();
        g.validate(&Terminal).unwrap();
        let at = |x: i64, y: i64| g.terms[&Coordinate::new(&[x, y])].word().text();
        assert_eq!(at(1, 1), "g+1");
        assert_eq!(at(2, 1), "e1");
        assert_eq!(at(1, 2), "e2");
        assert_eq!(at(2, 2), "g+1");
    }

    #[test]
    fn shapes_count() {
        assert_eq!(shapes(2, 3).len(), 5);
    }
}
