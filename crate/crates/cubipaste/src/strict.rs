//! The free strict cubical category with connections on a finite cubical
//! set: cells are rectangular pastings decorated by cells of the free
//! reflexive extension. Multiplication flattens pastings of pastings.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::boxes::DegenerateCell;
use crate::coords::{Configuration, Coordinate};
use crate::cubical::{CellId, CubicalSet, Sign};
use crate::pastings::{enumerate_rectangular, fill_shape_with, CellAlgebra, Divisor, PasteError, Pasting};
use crate::reflexive::{apply_reflexive, CubicalMap, RCell, ReflexiveCells};
use crate::words::{normal_words, Letter};

pub type FreeCell = Pasting<RCell>;

/// Pastings of cells of an inner algebra, themselves viewed as cells.
#[derive(Clone, Copy, Debug)]
pub struct PastingCells<A>(pub A);

impl<A: CellAlgebra> CellAlgebra for PastingCells<A> {
    type Cell = Pasting<A::Cell>;
    fn dim(&self, c: &Self::Cell) -> usize {
        c.arity
    }
    fn face(&self, c: &Self::Cell, dir: usize, sign: Sign) -> Self::Cell {
        c.pasting_face(&self.0, dir, sign).expect("face in range").into_normalized()
    }
    fn degenerate(&self, c: &Self::Cell, l: Letter) -> Option<Self::Cell> {
        c.degenerate(&self.0, l).ok().map(Pasting::into_normalized)
    }
    fn render(&self, c: &Self::Cell) -> String {
        format!("[{}]", c.render(&self.0))
    }
}

/// All free cells of dimension `n` with at most `size` terms.
pub fn free_cells(c: &CubicalSet, n: usize, size: usize, connections: bool) -> Vec<FreeCell> {
    let r = apply_reflexive(c, n, connections);
    let alg = ReflexiveCells { base: c, connections };
    enumerate_rectangular(&alg, &r.cells[n], n, size)
}

/// Underlying divisor of a free cell.
pub fn shape_of(x: &FreeCell) -> Divisor {
    x.map_cells(|c| DegenerateCell::new(&c.word).expect("normal word"))
}

/// All decorations of a divisor by cells of `c`, i.e. the fiber over the shape.
pub fn decorations_of(c: &CubicalSet, shape: &Divisor, connections: bool) -> Vec<FreeCell> {
    let alg = ReflexiveCells { base: c, connections };
    let shape = shape.normalized();
    let cands = |u: &Coordinate| -> Vec<RCell> {
        let w = shape.terms[u].word();
        c.cells(w.source).map(|core| RCell { word: w.clone(), core }).collect()
    };
    let coords: Vec<Coordinate> = shape.terms.keys().cloned().collect();
    let mut out = Vec::new();
    fill_shape_with(&alg, &cands, shape.arity, &coords, &mut BTreeMap::new(), &mut out);
    out
}

pub fn unit_cell(c: CellId) -> FreeCell {
    Pasting::unit(c.dim, RCell::plain(c))
}

/// Image of a free cell under a morphism of the base.
pub fn map_free(x: &FreeCell, f: &CubicalMap) -> FreeCell {
    x.map_cells(|c| RCell { word: c.word.clone(), core: f.apply(c.core) })
}

/// Glues the inner pastings of a rectangular pasting of pastings, shifting
/// each by the cumulative extents of the ones before it.
pub fn substitute<A: CellAlgebra>(alg: &A, outer: &Pasting<Pasting<A::Cell>>) -> Result<Pasting<A::Cell>, PasteError> {
    if !outer.is_rectangular() {
        return Err(PasteError::NotRectangular);
    }
    let outer = outer.normalized();
    let n = outer.arity;
    let ext = outer.extents();
    let inner: BTreeMap<Coordinate, Pasting<A::Cell>> =
        outer.terms.iter().map(|(c, p)| (c.clone(), p.normalized())).collect();
    let mut offsets: Vec<Vec<i64>> = Vec::with_capacity(n);
    for d in 0..n {
        let mut widths = vec![None; ext[d]];
        for (c, p) in &inner {
            if !p.is_rectangular() {
                return Err(PasteError::NotRectangular);
            }
            let w = p.extents()[d];
            let k = (c.0[d] - 1) as usize;
            match widths[k] {
                None => widths[k] = Some(w),
                Some(v) if v != w => return Err(PasteError::BoundaryMismatch(d + 1)),
                _ => {}
            }
        }
        let mut acc = 0i64;
        let mut off = Vec::with_capacity(ext[d]);
        for w in widths {
            off.push(acc);
            acc += w.unwrap() as i64;
        }
        offsets.push(off);
    }
    let mut terms = BTreeMap::new();
    for (c, p) in &inner {
        let shift: Vec<i64> = (0..n).map(|d| offsets[d][(c.0[d] - 1) as usize]).collect();
        for (u, t) in &p.terms {
            terms.insert(u.shifted(&shift), t.clone());
        }
    }
    let out = Pasting { arity: n, terms };
    out.validate(alg)?;
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub check: String,
    pub witness: String,
}

fn fail(check: &str, witness: String) -> Failure {
    Failure { check: check.to_string(), witness }
}

/// Intervals `lo..=hi` between consecutive cuts of `1..=len`.
fn intervals(len: usize, cuts: &[i64]) -> Vec<(i64, i64)> {
    let mut out = Vec::with_capacity(cuts.len() + 1);
    let mut lo = 1;
    for &c in cuts {
        out.push((lo, c));
        lo = c + 1;
    }
    out.push((lo, len as i64));
    out
}

/// Regroups a normalized rectangular pasting into blocks cut after the given
/// depths in each direction.
fn regroup<T: Clone + Ord + std::hash::Hash + std::fmt::Debug>(x: &Pasting<T>, cuts: &[Vec<i64>]) -> Pasting<Pasting<T>> {
    let ext = x.extents();
    let ivs: Vec<Vec<(i64, i64)>> = (0..x.arity).map(|d| intervals(ext[d], &cuts[d])).collect();
    let mut terms = BTreeMap::new();
    let mut idx = vec![0usize; x.arity];
    loop {
        let block = Pasting {
            arity: x.arity,
            terms: x
                .terms
                .iter()
                .filter(|(c, _)| (0..x.arity).all(|d| (ivs[d][idx[d]].0..=ivs[d][idx[d]].1).contains(&c.0[d])))
                .map(|(c, t)| (c.clone(), t.clone()))
                .collect(),
        };
        let at: Vec<i64> = idx.iter().map(|&i| i as i64 + 1).collect();
        terms.insert(Coordinate::new(&at), block.into_normalized());
        // odometer over block indices
        let mut d = 0;
        while d < x.arity && idx[d] + 1 == ivs[d].len() {
            idx[d] = 0;
            d += 1;
        }
        if d == x.arity {
            break;
        }
        idx[d] += 1;
    }
    Pasting { arity: x.arity, terms }
}

/// Pairs of cut sets `outer ⊆ middle` in one direction of length `len`.
fn nested_cuts(len: usize) -> Vec<(Vec<i64>, Vec<i64>)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for c in 1..len as i64 {
        out = out
            .into_iter()
            .flat_map(|(o, m)| {
                let mut mid = m.clone();
                mid.push(c);
                let mut both = o.clone();
                both.push(c);
                [(o.clone(), m), (o, mid.clone()), (both, mid)]
            })
            .collect();
    }
    out
}

/// Every way to view `x` as a pasting of pastings of pastings.
pub fn triple_nestings<T: Clone + Ord + std::hash::Hash + std::fmt::Debug>(
    x: &Pasting<T>,
) -> Vec<Pasting<Pasting<Pasting<T>>>> {
    let x = x.normalized();
    let ext = x.extents();
    let per_dir: Vec<Vec<(Vec<i64>, Vec<i64>)>> = ext.iter().map(|&l| nested_cuts(l)).collect();
    let mut choice = vec![0usize; x.arity];
    let mut out = Vec::new();
    loop {
        let mid_cuts: Vec<Vec<i64>> = (0..x.arity).map(|d| per_dir[d][choice[d]].1.clone()).collect();
        // outer cuts renumbered by the middle blocks they close
        let outer_cuts: Vec<Vec<i64>> = (0..x.arity)
            .map(|d| {
                let (o, m) = &per_dir[d][choice[d]];
                o.iter().map(|c| m.iter().position(|v| v == c).unwrap() as i64 + 1).collect()
            })
            .collect();
        out.push(regroup(&regroup(&x, &mid_cuts), &outer_cuts));
        let mut d = 0;
        while d < x.arity && choice[d] + 1 == per_dir[d].len() {
            choice[d] = 0;
            d += 1;
        }
        if d == x.arity {
            break;
        }
        choice[d] += 1;
    }
    out
}

/// Unit laws on every cell with at most `size` terms, and associativity on
/// every triply nested cell whose flattening has at most `size` terms.
pub fn check_monad_laws(c: &CubicalSet, n: usize, size: usize, connections: bool) -> (usize, Vec<Failure>) {
    let alg = ReflexiveCells { base: c, connections };
    let mut checked = 0;
    let mut fails = Vec::new();
    let cells = free_cells(c, n, size, connections);
    for x in &cells {
        checked += 2;
        let left = substitute(&alg, &Pasting::unit(n, x.clone()));
        if left.as_ref().map(|p| p.normalized()) != Ok(x.normalized()) {
            fails.push(fail("left unit", x.render(&alg)));
        }
        let lifted = x.map_cells(|rc| Pasting::unit(n, rc.clone()));
        let right = substitute(&alg, &lifted);
        if right.as_ref().map(|p| p.normalized()) != Ok(x.normalized()) {
            fails.push(fail("right unit", x.render(&alg)));
        }
    }
    let l2 = PastingCells(alg);
    for x in &cells {
        for t in triple_nestings(x) {
            checked += 1;
            let a = substitute(&l2, &t).and_then(|p| substitute(&alg, &p));
            let b = t
                .terms
                .iter()
                .map(|(k, v)| substitute(&alg, v).map(|p| (k.clone(), p.normalized())))
                .collect::<Result<BTreeMap<_, _>, _>>()
                .and_then(|terms| substitute(&alg, &Pasting { arity: n, terms }));
            match (a, b) {
                (Ok(a), Ok(b)) if a.equivalent(&b) && a.equivalent(x) => {}
                (a, b) => fails.push(fail(
                    "associativity",
                    format!("{}: {:?} vs {:?}", x.render(&alg), a.map(|p| p.len()), b.map(|p| p.len())),
                )),
            }
        }
    }
    (checked, fails)
}

/// Free cells of the terminal set, i.e. rectangular divisors.
pub fn terminal_cells(n: usize, size: usize, connections: bool) -> Vec<Divisor> {
    let cells: Vec<DegenerateCell> = (0..=n)
        .flat_map(|p| normal_words(p, n, connections))
        .map(|w| DegenerateCell::new(&w).unwrap())
        .collect();
    enumerate_rectangular(&crate::pastings::Terminal, &cells, n, size)
}

/// Cartesianity of the unit and multiplication squares over the map to the
/// terminal set, fiber by fiber.
pub fn check_cartesian_squares(
    c: &CubicalSet,
    n: usize,
    size: (usize, usize),
    connections: bool,
) -> (usize, Vec<Failure>) {
    let mut checked = 0;
    let mut fails = Vec::new();
    // unit: fiber over the identity singleton is the base itself
    let shape = Pasting::unit(n, DegenerateCell::identity(n));
    let fib = decorations_of(c, &shape, connections);
    checked += 1;
    let units: BTreeSet<FreeCell> = c.cells(n).map(unit_cell).collect();
    let fibset: BTreeSet<FreeCell> = fib.into_iter().map(|p| p.normalized()).collect();
    if units != fibset {
        fails.push(fail("unit square", format!("{} cells vs fiber of {}", units.len(), fibset.len())));
    }
    // multiplication: fibers over each pasting of divisors
    let talg = PastingCells(crate::pastings::Terminal);
    let inner = terminal_cells(n, size.0, connections);
    let outer = enumerate_rectangular(&talg, &inner, n, size.1);
    let alg = ReflexiveCells { base: c, connections };
    for w in &outer {
        checked += 1;
        let Ok(flat) = substitute(&crate::pastings::Terminal, w) else {
            fails.push(fail("multiplication on the terminal set", format!("{}", w.len())));
            continue;
        };
        let target: BTreeSet<FreeCell> =
            decorations_of(c, &flat, connections).into_iter().map(|p| p.normalized()).collect();
        let outer_coords: Vec<Coordinate> = w.terms.keys().cloned().collect();
        let cands = |u: &Coordinate| decorations_of(c, &w.terms[u], connections);
        let mut src = Vec::new();
        fill_shape_with(&PastingCells(alg), &cands, n, &outer_coords, &mut BTreeMap::new(), &mut src);
        let mut images = BTreeSet::new();
        for s in &src {
            match substitute(&alg, s) {
                Ok(p) => {
                    if !images.insert(p.normalized()) {
                        fails.push(fail("multiplication square", "two cells with the same image".into()));
                    }
                }
                Err(e) => fails.push(fail("multiplication square", e.to_string())),
            }
        }
        if images != target {
            fails.push(fail(
                "multiplication square",
                format!("fiber of {} cells maps onto {} of {}", src.len(), images.len(), target.len()),
            ));
        }
    }
    (checked, fails)
}

/// Checks that the free construction sends the pullback of a cospan to a
/// pullback, over every shape within bounds.
pub fn check_preserves_pullback(
    a: &CubicalSet,
    b: &CubicalSet,
    f: &CubicalMap,
    g: &CubicalMap,
    n: usize,
    size: usize,
    connections: bool,
) -> Option<Failure> {
    let (p, pa, pb) = crate::reflexive::pullback(a, b, f, g);
    for shape in terminal_cells(n, size, connections) {
        if shape.terms.values().any(|t| t.depth() > p.max_dim()) {
            continue;
        }
        let over_p = decorations_of(&p, &shape, connections);
        let over_a = decorations_of(a, &shape, connections);
        let over_b = decorations_of(b, &shape, connections);
        let mut pairs = BTreeSet::new();
        for x in &over_p {
            if !pairs.insert((map_free(x, &pa), map_free(x, &pb))) {
                return Some(fail("pullback", "two cells over one pair".into()));
            }
        }
        for x in &over_a {
            for y in &over_b {
                if map_free(x, f) == map_free(y, g) && !pairs.contains(&(x.clone(), y.clone())) {
                    return Some(fail("pullback", format!("pair without preimage over a shape with {} terms", shape.len())));
                }
            }
        }
    }
    None
}

/// Configuration underlying a free cell.
pub fn configuration_of(x: &FreeCell) -> Configuration {
    x.configuration()
}
