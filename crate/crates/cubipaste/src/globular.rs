//! Globular sets, trees and their sums, set models, strict categories, and
//! bounded generation of the globular coherators over a tree.
//!
//! Composition `y ∘_p x` needs the `p`-target of `x` to equal the
//! `p`-source of `y`. Reversors exist on cells of dimension at least
//! `max(m, 1)` in the `(∞,m)` theory.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coherator::{ArrowDump, Bounds, LevelDump, LiftDump, TheoryDump};
use crate::cubical::{CellId, Sign};
use crate::lifting::{generate_levels, verify_levels, Induction, Level, LiftingTheory, PairRecord};
use crate::sketches::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GlobularError {
    #[error("invalid tree: {0}")]
    InvalidTree(String),
    #[error("globular relation fails at cell {cell:?}: {what}")]
    Relation { cell: CellId, what: String },
    #[error("malformed globular set: {0}")]
    Malformed(String),
    #[error("cell {0:?} does not exist")]
    UnknownCell(CellId),
}

/// Cells per dimension with source and target maps into the dimension below.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobularSet {
    pub names: Vec<Vec<String>>,
    /// `source[d][i]` is the source of cell `i` of dimension `d + 1`.
    pub source: Vec<Vec<usize>>,
    pub target: Vec<Vec<usize>>,
}

impl GlobularSet {
    pub fn max_dim(&self) -> usize {
        self.names.len().saturating_sub(1)
    }

    pub fn count(&self, d: usize) -> usize {
        self.names.get(d).map_or(0, |v| v.len())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.names.iter().map(|v| v.len()).collect()
    }

    pub fn cells(&self, d: usize) -> impl Iterator<Item = CellId> {
        (0..self.count(d)).map(move |i| CellId::new(d, i))
    }

    pub fn name(&self, c: CellId) -> &str {
        &self.names[c.dim][c.idx]
    }

    pub fn s(&self, c: CellId) -> CellId {
        CellId::new(c.dim - 1, self.source[c.dim - 1][c.idx])
    }

    pub fn t(&self, c: CellId) -> CellId {
        CellId::new(c.dim - 1, self.target[c.dim - 1][c.idx])
    }

    /// Iterated source down to dimension `p`.
    pub fn s_to(&self, mut c: CellId, p: usize) -> CellId {
        while c.dim > p {
            c = self.s(c);
        }
        c
    }

    pub fn t_to(&self, mut c: CellId, p: usize) -> CellId {
        while c.dim > p {
            c = self.t(c);
        }
        c
    }

    /// `ss = st` and `ts = tt` on every cell of dimension at least 2.
    pub fn check(&self) -> Result<(), GlobularError> {
        if self.source.len() + 1 != self.names.len().max(1) || self.target.len() != self.source.len() {
            return Err(GlobularError::Malformed("source/target tables do not match the dimensions".into()));
        }
        for d in 1..=self.max_dim() {
            if self.source[d - 1].len() != self.count(d) || self.target[d - 1].len() != self.count(d) {
                return Err(GlobularError::Malformed(format!("missing faces in dimension {d}")));
            }
            for c in self.cells(d) {
                for f in [self.s(c), self.t(c)] {
                    if f.idx >= self.count(d - 1) {
                        return Err(GlobularError::UnknownCell(f));
                    }
                }
                if d >= 2 {
                    if self.s(self.s(c)) != self.s(self.t(c)) {
                        return Err(GlobularError::Relation { cell: c, what: "ss != st".into() });
                    }
                    if self.t(self.s(c)) != self.t(self.t(c)) {
                        return Err(GlobularError::Relation { cell: c, what: "ts != tt".into() });
                    }
                }
            }
        }
        Ok(())
    }

    /// The `n`-disk: two cells in each dimension below `n`, one on top.
    pub fn disk(n: usize) -> GlobularSet {
        GlobularSet::from(&GlobularTree { top: vec![n], bottom: vec![] })
    }
}

impl From<&GlobularTree> for GlobularSet {
    fn from(t: &GlobularTree) -> Self {
        globular_sum(t).expect("valid tree").set
    }
}

/// A table `top = [i1..ik]`, `bottom = [i'1..i'(k-1)]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GlobularTree {
    pub top: Vec<usize>,
    pub bottom: Vec<usize>,
}

impl GlobularTree {
    pub fn new(top: Vec<usize>, bottom: Vec<usize>) -> Result<Self, GlobularError> {
        let t = GlobularTree { top, bottom };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), GlobularError> {
        let k = self.top.len();
        if k == 0 {
            return Err(GlobularError::InvalidTree("empty top row".into()));
        }
        if self.bottom.len() + 1 != k {
            return Err(GlobularError::InvalidTree(format!("{} bottom entries for {} top entries", self.bottom.len(), k)));
        }
        for (l, &b) in self.bottom.iter().enumerate() {
            if !(self.top[l] > b && b < self.top[l + 1]) {
                return Err(GlobularError::InvalidTree(format!(
                    "need {} > {} < {} at position {}",
                    self.top[l],
                    b,
                    self.top[l + 1],
                    l + 1
                )));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        *self.top.iter().max().unwrap()
    }

    /// The linear tree of `k` edges.
    pub fn chain(k: usize) -> Self {
        GlobularTree { top: vec![1; k], bottom: vec![0; k.saturating_sub(1)] }
    }

    /// Cell counts per dimension: disks minus glued disks.
    pub fn closed_form_counts(&self) -> Vec<usize> {
        let n = self.dim();
        let c = |d: usize, m: usize| -> i64 {
            match d.cmp(&m) {
                std::cmp::Ordering::Less => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Greater => 0,
            }
        };
        (0..=n)
            .map(|d| {
                let v: i64 = self.top.iter().map(|&m| c(d, m)).sum::<i64>()
                    - self.bottom.iter().map(|&m| c(d, m)).sum::<i64>();
                v as usize
            })
            .collect()
    }
}

impl fmt::Display for GlobularTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "({}/{})", j(&self.top), j(&self.bottom))
    }
}

/// All valid trees with at most `k` top entries, all entries at most `max`.
pub fn trees(k: usize, max: usize) -> Vec<GlobularTree> {
    fn rec(k: usize, max: usize, cur: &mut GlobularTree, out: &mut Vec<GlobularTree>) {
        out.push(cur.clone());
        if cur.top.len() == k {
            return;
        }
        let last = *cur.top.last().unwrap();
        for b in 0..last {
            for t in b + 1..=max {
                cur.bottom.push(b);
                cur.top.push(t);
                rec(k, max, cur, out);
                cur.top.pop();
                cur.bottom.pop();
            }
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        return out;
    }
    for t in 0..=max {
        rec(k, max, &mut GlobularTree { top: vec![t], bottom: vec![] }, &mut out);
    }
    out
}

/// A cell of a disk: `(dim, side)` below the top, `side = None` on top.
type DiskCell = (usize, Option<Sign>);

fn disk_cells(n: usize) -> Vec<DiskCell> {
    let mut v = Vec::new();
    for d in 0..n {
        v.push((d, Some(Sign::Minus)));
        v.push((d, Some(Sign::Plus)));
    }
    v.push((n, None));
    v
}

fn disk_faces(c: DiskCell) -> Option<(DiskCell, DiskCell)> {
    if c.0 == 0 {
        None
    } else {
        Some(((c.0 - 1, Some(Sign::Minus)), (c.0 - 1, Some(Sign::Plus))))
    }
}

/// Image of a cell of the `m`-disk under the source or target inclusion.
fn include(c: DiskCell, side: Sign) -> DiskCell {
    match c.1 {
        Some(_) => c,
        None => (c.0, Some(side)),
    }
}

#[derive(Clone, Debug)]
pub struct GlobularSum {
    pub tree: GlobularTree,
    pub set: GlobularSet,
    /// Top cell of each disk of the top row.
    pub disk_tops: Vec<CellId>,
}

impl GlobularSum {
    /// Cell of the sum that cell `c` of disk `l` lands on.
    pub fn disk_cell(&self, l: usize, dim: usize) -> CellId {
        let mut c = self.disk_tops[l];
        while c.dim > dim {
            c = self.set.s(c);
        }
        c
    }
}

/// Colimit of the disks of the top row glued along the bottom row.
pub fn globular_sum(tree: &GlobularTree) -> Result<GlobularSum, GlobularError> {
    tree.validate()?;
    let mut nodes: Vec<(usize, DiskCell)> = Vec::new();
    let mut index: HashMap<(usize, DiskCell), usize> = HashMap::new();
    for (l, &n) in tree.top.iter().enumerate() {
        for c in disk_cells(n) {
            index.insert((l, c), nodes.len());
            nodes.push((l, c));
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    for (l, &b) in tree.bottom.iter().enumerate() {
        for c in disk_cells(b) {
            let left = index[&(l, include(c, Sign::Plus))];
            let right = index[&(l + 1, include(c, Sign::Minus))];
            uf.union(left, right);
        }
    }
    let n = tree.dim();
    let mut class_of: BTreeMap<usize, CellId> = BTreeMap::new();
    let mut names = vec![Vec::new(); n + 1];
    for (i, &(l, c)) in nodes.iter().enumerate() {
        let r = uf.find(i);
        if let std::collections::btree_map::Entry::Vacant(e) = class_of.entry(r) {
            let side = match c.1 {
                Some(Sign::Minus) => "s",
                Some(Sign::Plus) => "t",
                None => "",
            };
            e.insert(CellId::new(c.0, names[c.0].len()));
            names[c.0].push(format!("D{}.{}{}", l + 1, c.0, side));
        }
    }
    let mut source: Vec<Vec<usize>> = (1..=n).map(|d| vec![usize::MAX; names[d].len()]).collect();
    let mut target = source.clone();
    for (i, &(l, c)) in nodes.iter().enumerate() {
        let me = class_of[&uf.find(i)];
        if let Some((s, t)) = disk_faces(c) {
            let sc = class_of[&uf.find(index[&(l, s)])];
            let tc = class_of[&uf.find(index[&(l, t)])];
            for (tab, v) in [(&mut source, sc), (&mut target, tc)] {
                let slot = &mut tab[me.dim - 1][me.idx];
                if *slot != usize::MAX && *slot != v.idx {
                    return Err(GlobularError::Relation { cell: me, what: "glued faces disagree".into() });
                }
                *slot = v.idx;
            }
        }
    }
    let set = GlobularSet { names, source, target };
    set.check()?;
    let disk_tops = tree.top.iter().enumerate().map(|(l, &m)| class_of[&uf.find(index[&(l, (m, None))])]).collect();
    Ok(GlobularSum { tree: tree.clone(), set, disk_tops })
}

/// All globular maps from `a` to `b`, as cell assignments per dimension.
pub fn homs(a: &GlobularSet, b: &GlobularSet) -> Vec<Vec<Vec<usize>>> {
    let cells: Vec<CellId> = (0..=a.max_dim()).flat_map(|d| a.cells(d)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = (0..=a.max_dim()).map(|d| vec![usize::MAX; a.count(d)]).collect();
    fn rec(
        a: &GlobularSet,
        b: &GlobularSet,
        cells: &[CellId],
        k: usize,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<Vec<Vec<usize>>>,
    ) {
        if k == cells.len() {
            out.push(cur.clone());
            return;
        }
        let c = cells[k];
        for img in b.cells(c.dim) {
            if c.dim > 0 {
                let (s, t) = (a.s(c), a.t(c));
                if b.s(img).idx != cur[s.dim][s.idx] || b.t(img).idx != cur[t.dim][t.idx] {
                    continue;
                }
            }
            cur[c.dim][c.idx] = img.idx;
            rec(a, b, cells, k + 1, cur, out);
        }
        cur[c.dim][c.idx] = usize::MAX;
    }
    if a.max_dim() > b.max_dim() && a.count(a.max_dim()) > 0 {
        return out;
    }
    rec(a, b, &cells, 0, &mut cur, &mut out);
    out
}

/// Values of a presheaf on one tree with the restriction to each top disk.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeModel {
    pub tree: GlobularTree,
    /// Each element listed by its restrictions, one cell index per disk.
    pub elements: Vec<Vec<usize>>,
}

/// The model of a globular set: elements over `t` are maps from the sum of `t`.
pub fn hom_model(g: &GlobularSet, tree: &GlobularTree) -> TreeModel {
    let sum = globular_sum(tree).expect("valid tree");
    let elements = homs(&sum.set, g)
        .into_iter()
        .map(|h| sum.disk_tops.iter().map(|c| h[c.dim][c.idx]).collect())
        .collect();
    TreeModel { tree: tree.clone(), elements }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ModelFailure {
    pub tree: GlobularTree,
    pub witness: String,
}

/// Tuples of disk cells matching along the bottom row.
pub fn fiber_product(g: &GlobularSet, tree: &GlobularTree) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for (l, &m) in tree.top.iter().enumerate() {
        let mut next = Vec::new();
        for prefix in &out {
            for c in g.cells(m) {
                if l > 0 {
                    let b = tree.bottom[l - 1];
                    let prev = CellId::new(tree.top[l - 1], prefix[l - 1]);
                    if g.t_to(prev, b) != g.s_to(c, b) {
                        continue;
                    }
                }
                let mut v: Vec<usize> = prefix.clone();
                v.push(c.idx);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Checks that each tree's elements map bijectively onto the fiber product
/// of the disk values of `g`.
pub fn model_check(g: &GlobularSet, fragment: &[TreeModel]) -> Result<usize, ModelFailure> {
    for m in fragment {
        let fp: BTreeSet<Vec<usize>> = fiber_product(g, &m.tree).into_iter().collect();
        let mut seen = BTreeSet::new();
        for e in &m.elements {
            if !fp.contains(e) {
                return Err(ModelFailure { tree: m.tree.clone(), witness: format!("element {e:?} is not a matching family") });
            }
            if !seen.insert(e.clone()) {
                return Err(ModelFailure { tree: m.tree.clone(), witness: format!("two elements restrict to {e:?}") });
            }
        }
        if let Some(miss) = fp.difference(&seen).next() {
            return Err(ModelFailure { tree: m.tree.clone(), witness: format!("matching family {miss:?} has no element") });
        }
    }
    Ok(fragment.len())
}

/// A globular set with identities, compositions and optional reversors,
/// given by tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StrictCategory {
    pub set: GlobularSet,
    /// `unit[d][i]` is the identity on cell `i` of dimension `d`.
    pub unit: Vec<Vec<usize>>,
    /// `(n, p, y, x) -> y ∘_p x` on `n`-cells.
    pub comp: BTreeMap<(usize, usize, usize, usize), usize>,
    /// `inverse[n]` for dimensions that have reversors.
    pub inverse: BTreeMap<usize, Vec<usize>>,
}

impl StrictCategory {
    fn id(&self, c: CellId) -> CellId {
        CellId::new(c.dim + 1, self.unit[c.dim][c.idx])
    }

    /// Identity of `c` lifted to dimension `n`.
    fn id_to(&self, mut c: CellId, n: usize) -> CellId {
        while c.dim < n {
            c = self.id(c);
        }
        c
    }

    fn composable(&self, p: usize, y: CellId, x: CellId) -> bool {
        self.set.s_to(y, p) == self.set.t_to(x, p)
    }

    fn c(&self, p: usize, y: CellId, x: CellId) -> Option<CellId> {
        self.comp.get(&(y.dim, p, y.idx, x.idx)).map(|&z| CellId::new(y.dim, z))
    }

    /// Violations of the strict category equations and of the inverse laws
    /// in dimensions at least `max(m, 1)` up to the top dimension.
    pub fn violations(&self, m: usize) -> Vec<String> {
        let g = &self.set;
        let top = g.max_dim();
        let mut out = Vec::new();
        for d in 0..top {
            for c in g.cells(d) {
                let u = self.id(c);
                if g.s(u) != c || g.t(u) != c {
                    out.push(format!("identity on {} has wrong faces", g.name(c)));
                }
            }
        }
        for n in 1..=top {
            for p in 0..n {
                for y in g.cells(n) {
                    for x in g.cells(n) {
                        if !self.composable(p, y, x) {
                            continue;
                        }
                        let Some(z) = self.c(p, y, x) else {
                            out.push(format!("{} ∘{p} {} is undefined", g.name(y), g.name(x)));
                            continue;
                        };
                        // faces of a composite
                        let (sz, tz) = (g.s(z), g.t(z));
                        let (ws, wt) = if p == n - 1 {
                            (Some(g.s(x)), Some(g.t(y)))
                        } else {
                            (self.c(p, g.s(y), g.s(x)), self.c(p, g.t(y), g.t(x)))
                        };
                        if Some(sz) != ws || Some(tz) != wt {
                            out.push(format!("faces of {} ∘{p} {}", g.name(y), g.name(x)));
                        }
                    }
                }
                // units
                for x in g.cells(n) {
                    let l = self.c(p, x, self.id_to(g.s_to(x, p), n));
                    let r = self.c(p, self.id_to(g.t_to(x, p), n), x);
                    if l != Some(x) || r != Some(x) {
                        out.push(format!("unit law for {} in direction {p}", g.name(x)));
                    }
                }
                // associativity
                for x in g.cells(n) {
                    for y in g.cells(n) {
                        if !self.composable(p, y, x) {
                            continue;
                        }
                        for z in g.cells(n) {
                            if !self.composable(p, z, y) {
                                continue;
                            }
                            let a = self.c(p, z, y).and_then(|zy| self.c(p, zy, x));
                            let b = self.c(p, y, x).and_then(|yx| self.c(p, z, yx));
                            if a != b {
                                out.push(format!("associativity for {}, {}, {}", g.name(z), g.name(y), g.name(x)));
                            }
                        }
                    }
                }
            }
            // interchange for p < q < n
            for q in 1..n {
                for p in 0..q {
                    self.interchange(n, p, q, &mut out);
                }
            }
            // identities preserve composition: 1(y ∘_p x) = 1y ∘_p 1x
            if n < top {
                for p in 0..n {
                    for y in g.cells(n) {
                        for x in g.cells(n) {
                            if !self.composable(p, y, x) {
                                continue;
                            }
                            let l = self.c(p, y, x).map(|z| self.id(z));
                            let r = self.c(p, self.id(y), self.id(x));
                            if l != r {
                                out.push(format!("identities do not preserve {} ∘{p} {}", g.name(y), g.name(x)));
                            }
                        }
                    }
                }
            }
            if n >= m.max(1) {
                let Some(inv) = self.inverse.get(&n) else {
                    out.push(format!("no reversor in dimension {n}"));
                    continue;
                };
                for a in g.cells(n) {
                    let j = CellId::new(n, inv[a.idx]);
                    if g.s(j) != g.t(a) || g.t(j) != g.s(a) {
                        out.push(format!("reversor of {} has wrong faces", g.name(a)));
                        continue;
                    }
                    if self.c(n - 1, a, j) != Some(self.id(g.t(a))) || self.c(n - 1, j, a) != Some(self.id(g.s(a))) {
                        out.push(format!("reversor of {} is not an inverse", g.name(a)));
                    }
                }
            }
        }
        out
    }

    fn interchange(&self, n: usize, p: usize, q: usize, out: &mut Vec<String>) {
        let g = &self.set;
        let cells: Vec<CellId> = g.cells(n).collect();
        for &x in &cells {
            for &y in &cells {
                if !self.composable(q, y, x) {
                    continue;
                }
                for &x2 in &cells {
                    if !self.composable(p, x2, x) {
                        continue;
                    }
                    for &y2 in &cells {
                        if !self.composable(q, y2, x2) || !self.composable(p, y2, y) {
                            continue;
                        }
                        let a = match (self.c(q, y2, x2), self.c(q, y, x)) {
                            (Some(l), Some(r)) => self.c(p, l, r),
                            _ => None,
                        };
                        let b = match (self.c(p, y2, y), self.c(p, x2, x)) {
                            (Some(l), Some(r)) => self.c(q, l, r),
                            _ => None,
                        };
                        if a != b {
                            out.push(format!("interchange in directions {p}, {q}"));
                        }
                    }
                }
            }
        }
    }
}

/// The poset `0 < 1 < ... < k` as a strict category with only identity cells
/// above dimension 1.
pub fn poset_category(k: usize, max_dim: usize) -> StrictCategory {
    let mut names = vec![(0..=k).map(|i| i.to_string()).collect::<Vec<_>>()];
    let mut arrows = Vec::new();
    for i in 0..=k {
        for j in i..=k {
            arrows.push((i, j));
        }
    }
    let aidx = |i: usize, j: usize| arrows.iter().position(|&a| a == (i, j)).unwrap();
    names.push(arrows.iter().map(|(i, j)| format!("{i}{j}")).collect());
    let mut source = vec![arrows.iter().map(|a| a.0).collect::<Vec<_>>()];
    let mut target = vec![arrows.iter().map(|a| a.1).collect::<Vec<_>>()];
    let mut unit = vec![(0..=k).map(|i| aidx(i, i)).collect::<Vec<_>>()];
    let mut comp = BTreeMap::new();
    for &(i, j) in &arrows {
        for &(j2, l) in &arrows {
            if j == j2 {
                comp.insert((1, 0, aidx(j, l), aidx(i, j)), aidx(i, l));
            }
        }
    }
    // identity cells above: one per arrow in each dimension
    for d in 2..=max_dim {
        let m = arrows.len();
        names.push(arrows.iter().map(|(i, j)| format!("1^{d}({i}{j})")).collect());
        source.push((0..m).collect());
        target.push((0..m).collect());
        unit.push((0..m).collect());
        for a in 0..m {
            for p in 0..d - 1 {
                for b in 0..m {
                    if let Some(&z) = comp.get(&(d - 1, p, a, b)) {
                        comp.insert((d, p, a, b), z);
                    }
                }
            }
            comp.insert((d, d - 1, a, a), a);
        }
    }
    if max_dim == 0 {
        names.truncate(1);
        source.clear();
        target.clear();
        unit.clear();
        comp.clear();
    } else {
        unit.truncate(max_dim);
    }
    let mut inverse = BTreeMap::new();
    for d in 2..=max_dim {
        inverse.insert(d, (0..arrows.len()).collect());
    }
    StrictCategory { set: GlobularSet { names, source, target }, unit, comp, inverse }
}

/// One object, one arrow and the group `Z/n` of 2-cells, with both
/// compositions given by addition.
pub fn cyclic_two_category(n: usize) -> StrictCategory {
    let names = vec![vec!["*".to_string()], vec!["1".to_string()], (0..n).map(|i| format!("g{i}")).collect()];
    let source = vec![vec![0], vec![0; n]];
    let target = source.clone();
    let unit = vec![vec![0], vec![0]];
    let mut comp = BTreeMap::new();
    comp.insert((1, 0, 0, 0), 0);
    for a in 0..n {
        for b in 0..n {
            comp.insert((2, 0, a, b), (a + b) % n);
            comp.insert((2, 1, a, b), (a + b) % n);
        }
    }
    let mut inverse = BTreeMap::new();
    inverse.insert(1, vec![0]);
    inverse.insert(2, (0..n).map(|a| (n - a) % n).collect());
    StrictCategory { set: GlobularSet { names, source, target }, unit, comp, inverse }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GTerm {
    Gen(CellId),
    /// `y ∘_p x` on `n`-cells.
    Comp { n: usize, p: usize, y: Arc<GTerm>, x: Arc<GTerm> },
    Refl(Arc<GTerm>),
    Rev(Arc<GTerm>),
    Lift(Arc<(GTerm, GTerm)>),
}

impl GTerm {
    pub fn dim(&self) -> usize {
        match self {
            GTerm::Gen(c) => c.dim,
            GTerm::Comp { n, .. } => *n,
            GTerm::Refl(x) => x.dim() + 1,
            GTerm::Rev(x) => x.dim(),
            GTerm::Lift(l) => l.0.dim() + 1,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            GTerm::Gen(_) | GTerm::Lift(_) => 1,
            GTerm::Comp { y, x, .. } => y.size() + x.size(),
            GTerm::Refl(x) | GTerm::Rev(x) => 1 + x.size(),
        }
    }

    pub fn is_bare(&self) -> bool {
        match self {
            GTerm::Gen(_) => true,
            GTerm::Refl(x) => x.is_bare(),
            _ => false,
        }
    }

    pub fn render(&self, g: &GlobularSet) -> String {
        match self {
            GTerm::Gen(c) => g.name(*c).to_string(),
            GTerm::Comp { p, y, x, .. } => format!("({} *{} {})", y.render(g), p, x.render(g)),
            GTerm::Refl(x) => format!("1({})", x.render(g)),
            GTerm::Rev(x) => format!("j({})", x.render(g)),
            GTerm::Lift(l) => format!("[{}, {}]", l.0.render(g), l.1.render(g)),
        }
    }
}

impl fmt::Display for GTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GTerm::Gen(c) => write!(f, "x{}_{}", c.dim, c.idx),
            GTerm::Comp { p, y, x, .. } => write!(f, "({y} *{p} {x})"),
            GTerm::Refl(x) => write!(f, "1({x})"),
            GTerm::Rev(x) => write!(f, "j({x})"),
            GTerm::Lift(l) => write!(f, "[{}, {}]", l.0, l.1),
        }
    }
}

/// The single lift kind of the globular theories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GlobLift;

impl fmt::Display for GlobLift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lift")
    }
}

/// Free reflexive `(∞,m)`-magma over a globular set, within bounds.
#[derive(Clone, Debug)]
pub struct GlobularMagma {
    pub base: GlobularSet,
    pub m: usize,
    pub max_dim: usize,
    pub max_size: usize,
}

impl GlobularMagma {
    pub fn has_reversors(&self, n: usize) -> bool {
        n >= self.m.max(1)
    }

    pub fn s(&self, t: &GTerm) -> GTerm {
        self.face(t, Sign::Minus)
    }

    pub fn t(&self, t: &GTerm) -> GTerm {
        self.face(t, Sign::Plus)
    }

    pub fn face(&self, t: &GTerm, side: Sign) -> GTerm {
        assert!(t.dim() > 0, "face of a 0-term");
        match t {
            GTerm::Gen(c) => GTerm::Gen(match side {
                Sign::Minus => self.base.s(*c),
                Sign::Plus => self.base.t(*c),
            }),
            GTerm::Comp { n, p, y, x } => {
                if *p + 1 == *n {
                    match side {
                        Sign::Minus => self.face(x, side),
                        Sign::Plus => self.face(y, side),
                    }
                } else {
                    GTerm::Comp { n: n - 1, p: *p, y: Arc::new(self.face(y, side)), x: Arc::new(self.face(x, side)) }
                }
            }
            GTerm::Refl(x) => (**x).clone(),
            GTerm::Rev(x) => self.face(x, side.flip()),
            GTerm::Lift(l) => match side {
                Sign::Minus => l.0.clone(),
                Sign::Plus => l.1.clone(),
            },
        }
    }

    pub fn face_to(&self, t: &GTerm, p: usize, side: Sign) -> GTerm {
        let mut c = t.clone();
        while c.dim() > p {
            c = self.face(&c, side);
        }
        c
    }

    pub fn compose(&self, p: usize, y: &GTerm, x: &GTerm) -> Option<GTerm> {
        let n = y.dim();
        if x.dim() != n || p >= n || self.face_to(y, p, Sign::Minus) != self.face_to(x, p, Sign::Plus) {
            return None;
        }
        Some(GTerm::Comp { n, p, y: Arc::new(y.clone()), x: Arc::new(x.clone()) })
    }

    pub fn parallel(&self, f: &GTerm, g: &GTerm) -> bool {
        f.dim() == g.dim() && (f.dim() == 0 || (self.s(f) == self.s(g) && self.t(f) == self.t(g)))
    }

    pub fn lift(&self, f: &GTerm, g: &GTerm) -> Result<GTerm, String> {
        if !self.parallel(f, g) {
            return Err(format!("{} and {} are not parallel", f.render(&self.base), g.render(&self.base)));
        }
        if f.is_bare() && g.is_bare() {
            return Err("both arrows are bare".into());
        }
        Ok(GTerm::Lift(Arc::new((f.clone(), g.clone()))))
    }

    /// Globular relations on `t`, and the boundary of a lift.
    pub fn violations(&self, t: &GTerm) -> Vec<String> {
        let mut out = Vec::new();
        let r = |x: &GTerm| x.render(&self.base);
        if t.dim() >= 2 {
            let (s, tt) = (self.s(t), self.t(t));
            if self.s(&s) != self.s(&tt) || self.t(&s) != self.t(&tt) {
                out.push(format!("{}: globular relations fail", r(t)));
            }
        }
        if let GTerm::Lift(l) = t {
            if self.s(t) != l.0 || self.t(t) != l.1 {
                out.push(format!("{}: boundary differs from the lifted pair", r(t)));
            }
        }
        out
    }

    pub fn enumerate(&self) -> Vec<GTerm> {
        let mut by_size: Vec<Vec<GTerm>> = vec![Vec::new(); self.max_size + 1];
        if self.max_size == 0 {
            return Vec::new();
        }
        for d in 0..=self.base.max_dim().min(self.max_dim) {
            by_size[1].extend(self.base.cells(d).map(GTerm::Gen));
        }
        for s in 2..=self.max_size {
            let mut found = BTreeSet::new();
            for x in &by_size[s - 1] {
                if x.dim() < self.max_dim {
                    found.insert(GTerm::Refl(Arc::new(x.clone())));
                }
                if self.has_reversors(x.dim()) {
                    found.insert(GTerm::Rev(Arc::new(x.clone())));
                }
            }
            for sy in 1..s {
                let sx = s - sy;
                let mut index: HashMap<(usize, usize, GTerm), Vec<&GTerm>> = HashMap::new();
                for x in &by_size[sx] {
                    for p in 0..x.dim() {
                        index.entry((x.dim(), p, self.face_to(x, p, Sign::Plus))).or_default().push(x);
                    }
                }
                for y in &by_size[sy] {
                    for p in 0..y.dim() {
                        if let Some(xs) = index.get(&(y.dim(), p, self.face_to(y, p, Sign::Minus))) {
                            for x in xs {
                                found.insert(GTerm::Comp {
                                    n: y.dim(),
                                    p,
                                    y: Arc::new(y.clone()),
                                    x: Arc::new((*x).clone()),
                                });
                            }
                        }
                    }
                }
            }
            by_size[s] = found.into_iter().collect();
        }
        let mut all: Vec<GTerm> = by_size.into_iter().flatten().collect();
        all.sort();
        all
    }
}

impl LiftingTheory for GlobularMagma {
    type Term = GTerm;
    type Kind = GlobLift;

    fn dim(&self, t: &GTerm) -> usize {
        t.dim()
    }
    fn is_bare(&self, t: &GTerm) -> bool {
        t.is_bare()
    }
    fn parallel_key(&self, t: &GTerm) -> Vec<GTerm> {
        if t.dim() == 0 {
            Vec::new()
        } else {
            vec![self.s(t), self.t(t)]
        }
    }
    fn kinds(&self, f: &GTerm, g: &GTerm) -> Vec<GlobLift> {
        if f != g && self.lift(f, g).is_ok() {
            vec![GlobLift]
        } else {
            Vec::new()
        }
    }
    fn lift(&self, _: &GlobLift, f: &GTerm, g: &GTerm) -> Result<GTerm, String> {
        GlobularMagma::lift(self, f, g)
    }
    fn verify_lift(&self, t: &GTerm) -> Vec<String> {
        self.violations(t)
    }
    fn close(&self, atoms: &[GTerm]) -> Vec<GTerm> {
        let mut out = Vec::new();
        let mut frontier: Vec<GTerm> = atoms.to_vec();
        while let Some(x) = frontier.pop() {
            if x.size() >= self.max_size {
                continue;
            }
            let mut next = Vec::new();
            if x.dim() < self.max_dim {
                next.push(GTerm::Refl(Arc::new(x.clone())));
            }
            if self.has_reversors(x.dim()) {
                next.push(GTerm::Rev(Arc::new(x.clone())));
            }
            for y in next {
                out.push(y.clone());
                frontier.push(y);
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

pub struct GlobularGenerated {
    pub sum: GlobularSum,
    pub magma: GlobularMagma,
    pub levels: Vec<Level<GTerm, GlobLift>>,
}

pub fn generate(tree: &GlobularTree, m: usize, bounds: &Bounds, induction: Induction) -> Result<GlobularGenerated, String> {
    let sum = globular_sum(tree).map_err(|e| e.to_string())?;
    let magma = GlobularMagma { base: sum.set.clone(), m, max_dim: bounds.max_dim, max_size: bounds.max_term_size };
    let level0 = magma.enumerate();
    let levels = generate_levels(&magma, level0, bounds.levels, bounds.max_dim, induction)?;
    Ok(GlobularGenerated { sum, magma, levels })
}

impl GlobularGenerated {
    pub fn verify(&self) -> Vec<String> {
        verify_levels(&self.magma, &self.levels)
    }

    pub fn dump(&self, bounds: &Bounds) -> TheoryDump {
        let g = &self.magma.base;
        let r = |t: &GTerm| t.render(g);
        TheoryDump {
            theory: format!("M{} over {}", self.magma.m, self.sum.tree),
            bounds: bounds.clone(),
            levels: self
                .levels
                .iter()
                .map(|l| {
                    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
                    for t in &l.all_terms {
                        *counts.entry(t.dim()).or_default() += 1;
                    }
                    LevelDump {
                        level: l.index,
                        arrow_counts: counts,
                        new_arrows: l.new_terms.iter().map(|t| ArrowDump { dim: t.dim(), body: r(t) }).collect(),
                        new_pairs: l
                            .new_pairs
                            .iter()
                            .map(|p| PairRecord { f: r(&p.f), g: r(&p.g), kinds: vec!["lift".into()] })
                            .collect(),
                        lifts: l
                            .lifts
                            .iter()
                            .filter_map(|t| match t {
                                GTerm::Lift(c) => Some(LiftDump {
                                    kind: "lift".into(),
                                    dim: t.dim(),
                                    f: r(&c.0),
                                    g: r(&c.1),
                                    faces: [("s".to_string(), r(&self.magma.s(t))), ("t".to_string(), r(&self.magma.t(t)))]
                                        .into_iter()
                                        .collect(),
                                }),
                                _ => None,
                            })
                            .collect(),
                    }
                })
                .collect(),
        }
    }
}

/// Arrow inclusion of the `m + 1` fragment into the `m` fragment, level by level.
pub fn filtration_holds(tree: &GlobularTree, m: usize, bounds: &Bounds) -> Result<bool, String> {
    let hi = generate(tree, m + 1, bounds, Induction::Cumulative)?;
    let lo = generate(tree, m, bounds, Induction::Cumulative)?;
    Ok(hi.levels.iter().zip(&lo.levels).all(|(a, b)| a.all_terms.is_subset(&b.all_terms)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sums() {
        assert_eq!(globular_sum(&GlobularTree::new(vec![1], vec![]).unwrap()).unwrap().set.counts(), vec![2, 1]);
        assert_eq!(globular_sum(&GlobularTree::chain(2)).unwrap().set.counts(), vec![3, 2]);
        let w = GlobularTree::new(vec![2, 1], vec![0]).unwrap();
        assert_eq!(globular_sum(&w).unwrap().set.counts(), vec![3, 3, 1]);
        assert!(GlobularTree::new(vec![2, 1], vec![1]).is_err());
    }

    #[test]
    fn sample_categories_are_strict() {
        assert_eq!(poset_category(2, 2).violations(2), Vec::<String>::new());
        assert_eq!(cyclic_two_category(2).violations(0), Vec::<String>::new());
        assert!(!poset_category(2, 2).violations(1).is_empty());
    }

    #[test]
    fn inverse_pair_is_admissible() {
        let sum = globular_sum(&GlobularTree::chain(1)).unwrap();
        let mg = GlobularMagma { base: sum.set, m: 0, max_dim: 2, max_size: 3 };
        let x = GTerm::Gen(CellId::new(1, 0));
        let xj = mg.compose(0, &x, &GTerm::Rev(Arc::new(x.clone()))).unwrap();
        let unit = GTerm::Refl(Arc::new(mg.t(&x)));
        assert_eq!(mg.kinds(&xj, &unit), vec![GlobLift]);
    }
}
