//! The free reflexive cubical set with connections on a finite cubical set,
//! with its unit and multiplication, morphisms and pullback checks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::cubical::{CellId, CubicalSet, CubicalSetBuilder, FaceSelector, Sign};
use crate::pastings::CellAlgebra;
use crate::words::{normal_words, push_face_symbolic, Letter, Word};

/// A normal word applied to a cell of the base.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RCell {
    pub word: Word,
    pub core: CellId,
}

impl RCell {
    pub fn plain(core: CellId) -> Self {
        RCell { word: Word::empty(core.dim), core }
    }

    pub fn dim(&self) -> usize {
        self.word.target()
    }
}

/// Face of `word(core)` obtained by pushing the face through the word.
pub fn rcell_face(base: &CubicalSet, c: &RCell, dir: usize, sign: Sign) -> RCell {
    let (w, rest) = push_face_symbolic(&c.word, dir, sign);
    let core = match rest {
        Some((d, s)) => base.face(c.core, d, s),
        None => c.core,
    };
    RCell { word: w.normalize(), core }
}

/// Same face computed through the semantic cube map.
pub fn rcell_face_semantic(base: &CubicalSet, c: &RCell, dir: usize, sign: Sign) -> RCell {
    let (w, sel) = c.word.face(dir, sign);
    RCell { word: w, core: base.apply_selector(c.core, &sel) }
}

pub fn rcell_select(base: &CubicalSet, c: &RCell, sel: &FaceSelector) -> RCell {
    let (w, s) = c.word.select(sel);
    RCell { word: w, core: base.apply_selector(c.core, &s) }
}

/// Cells of the free reflexive extension, viewed as a cell algebra.
#[derive(Clone, Copy, Debug)]
pub struct ReflexiveCells<'a> {
    pub base: &'a CubicalSet,
    pub connections: bool,
}

impl CellAlgebra for ReflexiveCells<'_> {
    type Cell = RCell;
    fn dim(&self, c: &RCell) -> usize {
        c.dim()
    }
    fn face(&self, c: &RCell, dir: usize, sign: Sign) -> RCell {
        rcell_face(self.base, c, dir, sign)
    }
    fn degenerate(&self, c: &RCell, l: Letter) -> Option<RCell> {
        if l.is_connection() && !self.connections {
            return None;
        }
        Some(RCell { word: c.word.then(l).normalize(), core: c.core })
    }
    fn render(&self, c: &RCell) -> String {
        cell_name(self.base, c)
    }
}

fn cell_name(base: &CubicalSet, c: &RCell) -> String {
    if c.word.is_empty() {
        base.name(c.core).to_string()
    } else {
        format!("{}({})", c.word.text(), base.name(c.core))
    }
}

/// Name of a cell inside the extension; `id` marks the empty word so that
/// names stay distinct when the extension is applied again.
fn set_name(base: &CubicalSet, c: &RCell) -> String {
    let w = if c.word.is_empty() { "id".to_string() } else { c.word.text() };
    format!("{}({})", w, base.name(c.core))
}

/// The free extension computed up to a dimension bound.
#[derive(Clone, Debug)]
pub struct Reflexive {
    pub base: CubicalSet,
    pub connections: bool,
    pub cells: Vec<Vec<RCell>>,
    pub index: HashMap<RCell, usize>,
    pub set: CubicalSet,
}

/// Builds the free extension of `base` up to `up_to` dimensions.
pub fn apply_reflexive(base: &CubicalSet, up_to: usize, connections: bool) -> Reflexive {
    let mut cells: Vec<Vec<RCell>> = vec![Vec::new(); up_to + 1];
    let mut words: BTreeMap<(usize, usize), Vec<Word>> = BTreeMap::new();
    for n in 0..=up_to {
        for p in 0..=n.min(base.max_dim()) {
            let ws = words.entry((p, n)).or_insert_with(|| normal_words(p, n, connections));
            for c in base.cells(p) {
                for w in ws.iter() {
                    cells[n].push(RCell { word: w.clone(), core: c });
                }
            }
        }
        cells[n].sort();
    }
    let mut index = HashMap::new();
    let mut b = CubicalSetBuilder::new(up_to);
    for per in &cells {
        for (i, c) in per.iter().enumerate() {
            index.insert(c.clone(), i);
            b.add_cell(c.dim(), &set_name(base, c)).expect("distinct names");
        }
    }
    for per in &cells {
        for (i, c) in per.iter().enumerate() {
            let n = c.dim();
            for d in 1..=n {
                for s in Sign::BOTH {
                    let f = rcell_face(base, c, d, s);
                    let fi = index[&f];
                    b.set_face(CellId::new(n, i), d, s, CellId::new(n - 1, fi)).unwrap();
                }
            }
        }
    }
    let set = b.build_unchecked().expect("all faces set");
    Reflexive { base: base.clone(), connections, cells, index, set }
}

impl Reflexive {
    pub fn id_of(&self, c: &RCell) -> CellId {
        CellId::new(c.dim(), self.index[c])
    }

    pub fn cell(&self, id: CellId) -> &RCell {
        &self.cells[id.dim][id.idx]
    }

    pub fn up_to(&self) -> usize {
        self.set.max_dim()
    }

    /// The inclusion of the base.
    pub fn unit(&self) -> CubicalMap {
        let maps = (0..=self.up_to())
            .map(|d| self.base.cells(d).map(|c| self.index[&RCell::plain(c)]).collect())
            .collect();
        CubicalMap { maps }
    }
}

/// Multiplication from the extension of `inner.set` to `inner`.
pub fn multiplication(outer: &Reflexive, inner: &Reflexive) -> CubicalMap {
    let maps = (0..=outer.up_to())
        .map(|d| {
            outer.cells[d]
                .iter()
                .map(|c| {
                    let mid = inner.cell(c.core);
                    let w = c.word.after(&mid.word).normalize();
                    inner.index[&RCell { word: w, core: mid.core }]
                })
                .collect()
        })
        .collect();
    CubicalMap { maps }
}

/// Image of a morphism `f: A -> B` under the free extension.
pub fn map_reflexive(f: &CubicalMap, ra: &Reflexive, rb: &Reflexive) -> CubicalMap {
    let maps = (0..=ra.up_to())
        .map(|d| {
            ra.cells[d]
                .iter()
                .map(|c| {
                    let core = CellId::new(c.core.dim, f.maps[c.core.dim][c.core.idx]);
                    rb.index[&RCell { word: c.word.clone(), core }]
                })
                .collect()
        })
        .collect();
    CubicalMap { maps }
}

/// A dimensionwise map of cells.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubicalMap {
    pub maps: Vec<Vec<usize>>,
}

impl CubicalMap {
    pub fn apply(&self, c: CellId) -> CellId {
        CellId::new(c.dim, self.maps[c.dim][c.idx])
    }

    pub fn identity(a: &CubicalSet) -> Self {
        CubicalMap { maps: (0..=a.max_dim()).map(|d| (0..a.count(d)).collect()).collect() }
    }

    pub fn then(&self, g: &CubicalMap) -> CubicalMap {
        CubicalMap {
            maps: self.maps.iter().enumerate().map(|(d, v)| v.iter().map(|&i| g.maps[d][i]).collect()).collect(),
        }
    }

    /// First cell where the map fails to commute with a face.
    pub fn naturality_failure(&self, dom: &CubicalSet, cod: &CubicalSet) -> Option<(CellId, usize, Sign)> {
        for c in dom.all_cells() {
            for d in 1..=c.dim {
                for s in Sign::BOTH {
                    if self.apply(dom.face(c, d, s)) != cod.face(self.apply(c), d, s) {
                        return Some((c, d, s));
                    }
                }
            }
        }
        None
    }
}

/// The terminal cubical set truncated at `dim`.
pub fn terminal_set(dim: usize) -> CubicalSet {
    let mut b = CubicalSetBuilder::new(dim);
    for d in 0..=dim {
        b.add_cell(d, &format!("*{d}")).unwrap();
    }
    for d in 1..=dim {
        for k in 1..=d {
            for s in Sign::BOTH {
                b.set_face(CellId::new(d, 0), k, s, CellId::new(d - 1, 0)).unwrap();
            }
        }
    }
    b.build().unwrap()
}

/// The unique map to the terminal set.
pub fn to_terminal(a: &CubicalSet, dim: usize) -> CubicalMap {
    CubicalMap { maps: (0..=dim).map(|d| vec![0; a.count(d)]).collect() }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PullbackFailure {
    pub dim: usize,
    pub reason: String,
}

/// Checks that the square `p -> a -> c`, `p -> b -> c` commutes and that
/// `p(n)` maps bijectively onto the fiber product `a(n) x_c(n) b(n)`.
pub fn check_pullback(
    counts: (&[usize], &[usize], &[usize]),
    pa: &CubicalMap,
    pb: &CubicalMap,
    ac: &CubicalMap,
    bc: &CubicalMap,
    up_to: usize,
) -> Option<PullbackFailure> {
    let (np, na, nb) = counts;
    for d in 0..=up_to {
        let mut seen = BTreeSet::new();
        for x in 0..np[d] {
            let a = pa.maps[d][x];
            let b = pb.maps[d][x];
            if ac.maps[d][a] != bc.maps[d][b] {
                return Some(PullbackFailure { dim: d, reason: format!("square does not commute at cell {x}") });
            }
            if !seen.insert((a, b)) {
                return Some(PullbackFailure { dim: d, reason: format!("two cells over the pair ({a},{b})") });
            }
        }
        for a in 0..na[d] {
            for b in 0..nb[d] {
                if ac.maps[d][a] == bc.maps[d][b] && !seen.contains(&(a, b)) {
                    return Some(PullbackFailure { dim: d, reason: format!("pair ({a},{b}) has no preimage") });
                }
            }
        }
    }
    None
}

/// All morphisms between two finite cubical sets.
pub fn all_morphisms(a: &CubicalSet, b: &CubicalSet) -> Vec<CubicalMap> {
    let dim = a.max_dim().min(b.max_dim());
    if (dim + 1..=a.max_dim()).any(|d| a.count(d) > 0) {
        return Vec::new();
    }
    let cells: Vec<CellId> = (0..=dim).flat_map(|d| a.cells(d)).collect();
    let mut out = Vec::new();
    let mut cur: Vec<Vec<usize>> = (0..=a.max_dim()).map(|d| vec![usize::MAX; a.count(d)]).collect();
    fn go(
        k: usize,
        cells: &[CellId],
        a: &CubicalSet,
        b: &CubicalSet,
        cur: &mut Vec<Vec<usize>>,
        out: &mut Vec<CubicalMap>,
    ) {
        if k == cells.len() {
            out.push(CubicalMap { maps: cur.clone() });
            return;
        }
        let c = cells[k];
        'img: for t in 0..b.count(c.dim) {
            let tc = CellId::new(c.dim, t);
            for d in 1..=c.dim {
                for s in Sign::BOTH {
                    let f = a.face(c, d, s);
                    if cur[f.dim][f.idx] != b.face(tc, d, s).idx {
                        continue 'img;
                    }
                }
            }
            cur[c.dim][c.idx] = t;
            go(k + 1, cells, a, b, cur, out);
        }
        cur[c.dim][c.idx] = usize::MAX;
    }
    go(0, &cells, a, b, &mut cur, &mut out);
    out
}

/// Pullback of `f: A -> C` and `g: B -> C`, with its projections.
pub fn pullback(a: &CubicalSet, b: &CubicalSet, f: &CubicalMap, g: &CubicalMap) -> (CubicalSet, CubicalMap, CubicalMap) {
    let dim = a.max_dim().min(b.max_dim());
    let mut pairs: Vec<Vec<(usize, usize)>> = vec![Vec::new(); dim + 1];
    for (d, per) in pairs.iter_mut().enumerate() {
        for x in 0..a.count(d) {
            for y in 0..b.count(d) {
                if f.maps[d][x] == g.maps[d][y] {
                    per.push((x, y));
                }
            }
        }
    }
    let mut bld = CubicalSetBuilder::new(dim);
    for (d, per) in pairs.iter().enumerate() {
        for (x, y) in per {
            bld.add_cell(d, &format!("({},{})", a.name(CellId::new(d, *x)), b.name(CellId::new(d, *y)))).unwrap();
        }
    }
    for (d, per) in pairs.iter().enumerate().skip(1) {
        for (i, &(x, y)) in per.iter().enumerate() {
            for k in 1..=d {
                for s in Sign::BOTH {
                    let fx = a.face(CellId::new(d, x), k, s).idx;
                    let fy = b.face(CellId::new(d, y), k, s).idx;
                    let j = pairs[d - 1].iter().position(|&p| p == (fx, fy)).unwrap();
                    bld.set_face(CellId::new(d, i), k, s, CellId::new(d - 1, j)).unwrap();
                }
            }
        }
    }
    let p = bld.build_unchecked().unwrap();
    let pa = CubicalMap { maps: pairs.iter().map(|v| v.iter().map(|q| q.0).collect()).collect() };
    let pb = CubicalMap { maps: pairs.iter().map(|v| v.iter().map(|q| q.1).collect()).collect() };
    (p, pa, pb)
}

/// Pads a cubical set with empty dimensions up to `dim`.
pub fn extend_dim(a: &CubicalSet, dim: usize) -> CubicalSet {
    if a.max_dim() >= dim {
        return a.clone();
    }
    a.truncate(dim)
}

/// Canonical form under renaming cells within each dimension.
fn canonical_key(a: &CubicalSet) -> Vec<Vec<Vec<[usize; 2]>>> {
    // small sets only: try all permutations dimension by dimension
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![Vec::new()];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for k in 0..=p.len() {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }
    let dims = a.max_dim() + 1;
    let all: Vec<Vec<Vec<usize>>> = (0..dims).map(|d| perms(a.count(d))).collect();
    let mut best: Option<Vec<Vec<Vec<[usize; 2]>>>> = None;
    let mut choice = vec![0usize; dims];
    loop {
        let key: Vec<Vec<Vec<[usize; 2]>>> = (0..dims)
            .map(|d| {
                let perm = &all[d][choice[d]];
                let mut rows = vec![Vec::new(); a.count(d)];
                for c in a.cells(d) {
                    let row: Vec<[usize; 2]> = a
                        .face_table(c)
                        .iter()
                        .map(|pair| [all[d - 1][choice[d - 1]][pair[0]], all[d - 1][choice[d - 1]][pair[1]]])
                        .collect();
                    rows[perm[c.idx]] = row;
                }
                rows
            })
            .collect();
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
        let mut k = 0;
        loop {
            if k == dims {
                return best.unwrap();
            }
            choice[k] += 1;
            if choice[k] < all[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// All cubical sets with at most `max_cells` cells of dimension at most
/// `max_dim`, one per isomorphism class, including the empty set.
pub fn small_family(max_cells: usize, max_dim: usize) -> Vec<CubicalSet> {
    let mut counts: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..=max_dim {
        let mut next = Vec::new();
        for c in &counts {
            let used: usize = c.iter().sum();
            for k in 0..=(max_cells - used) {
                let mut v = c.clone();
                v.push(k);
                next.push(v);
            }
        }
        counts = next;
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for cnt in counts {
        if (1..cnt.len()).any(|d| cnt[d] > 0 && cnt[d - 1] == 0) {
            continue;
        }
        // every face table: cells of dim d choose 2d faces among cnt[d-1]
        let slots: Vec<(usize, usize, usize, usize)> = (1..cnt.len())
            .flat_map(|d| (0..cnt[d]).flat_map(move |i| (0..d).flat_map(move |k| (0..2).map(move |s| (d, i, k, s)))))
            .collect();
        let mut assign = vec![0usize; slots.len()];
        loop {
            let names: Vec<Vec<String>> =
                cnt.iter().enumerate().map(|(d, &k)| (0..k).map(|i| format!("c{d}_{i}")).collect()).collect();
            let mut faces: Vec<Vec<Vec<[usize; 2]>>> =
                cnt.iter().enumerate().map(|(d, &k)| vec![vec![[0, 0]; d]; k]).collect();
            for (n, &(d, i, k, s)) in slots.iter().enumerate() {
                faces[d][i][k][s] = assign[n];
            }
            let set = CubicalSet::from_tables(max_dim, names, faces);
            if set.check_identities().is_empty() && seen.insert(canonical_key(&set)) {
                out.push(set);
            }
            let mut n = 0;
            loop {
                if n == slots.len() {
                    break;
                }
                assign[n] += 1;
                if assign[n] < cnt[slots[n].0 - 1] {
                    break;
                }
                assign[n] = 0;
                n += 1;
            }
            if n == slots.len() {
                break;
            }
        }
    }
    out.sort_by_key(|s| (s.total(), s.counts()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cubical::standard_cube;

    #[test]
    fn point_counts() {
        let pt = standard_cube(0);
        let r = apply_reflexive(&pt, 2, true);
        assert_eq!(r.set.counts(), vec![1, 1, 1]);
        assert!(r.set.check_identities().is_empty());
    }

    #[test]
    fn interval_dim2() {
        let r = apply_reflexive(&standard_cube(1), 2, true);
        // four words on the edge, one on each vertex
        assert_eq!(r.set.count(2), 6);
    }

    #[test]
    fn family_size() {
        let f = small_family(3, 2);
        assert!(f.len() >= 8);
        assert!(f.iter().all(|s| s.check_identities().is_empty()));
    }
}
