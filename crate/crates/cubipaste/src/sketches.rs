//! Sketches of divisors and their realization as cubical sets.
//!
//! Objects of the sketch at level `p` are the `p`-dimensional faces of the
//! terms of a divisor, written as (term coordinate, selector). Cocones record
//! where two adjacent terms are glued; free arrows record unglued faces.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::coords::Coordinate;
use crate::cubical::{CellId, CubicalSet, CubicalSetBuilder, FaceSelector, Sign};
use crate::pastings::{Divisor, Terminal};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SketchObject {
    pub term: Coordinate,
    pub sel: FaceSelector,
}

impl SketchObject {
    pub fn level(&self) -> usize {
        self.sel.residual()
    }
}

/// Gluing of two terms adjacent in original direction `dir`, restricted to
/// the faces selected by `sel` (which leaves `dir` free).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Cocone {
    pub dir: usize,
    pub left: Coordinate,
    pub right: Coordinate,
    pub sel: FaceSelector,
}

impl Cocone {
    pub fn level(&self) -> usize {
        self.sel.residual()
    }

    /// Position of the gluing direction among the free directions.
    pub fn local_dir(&self) -> usize {
        self.sel.free_dirs().iter().position(|&d| d == self.dir).unwrap() + 1
    }

    pub fn apex(&self) -> (SketchObject, SketchObject) {
        let mut a = self.sel.clone();
        a.assign.insert(self.dir, Sign::Plus);
        let mut b = self.sel.clone();
        b.assign.insert(self.dir, Sign::Minus);
        (SketchObject { term: self.left.clone(), sel: a }, SketchObject { term: self.right.clone(), sel: b })
    }

    pub fn legs(&self) -> (SketchObject, SketchObject) {
        (
            SketchObject { term: self.left.clone(), sel: self.sel.clone() },
            SketchObject { term: self.right.clone(), sel: self.sel.clone() },
        )
    }
}

/// Image of a cocone under a face map of its level.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CoconeImage {
    Cocone(Cocone),
    /// Face taken in the gluing direction: the two legs become separate faces.
    Collapsed { left: SketchObject, right: SketchObject },
}

/// Generic image: restrict the selector and recompute everything.
pub fn cocone_face(c: &Cocone, k: usize, sign: Sign) -> CoconeImage {
    let free = c.sel.free_dirs();
    let d = free[k - 1];
    let mut sel = c.sel.clone();
    sel.assign.insert(d, sign);
    if d == c.dir {
        CoconeImage::Collapsed {
            left: SketchObject { term: c.left.clone(), sel: sel.clone() },
            right: SketchObject { term: c.right.clone(), sel },
        }
    } else {
        CoconeImage::Cocone(Cocone { dir: c.dir, left: c.left.clone(), right: c.right.clone(), sel })
    }
}

/// Image by the explicit case analysis on local indices: for `k < j` the
/// gluing direction drops to `j - 1`, for `k > j` it stays, for `k = j` the
/// cocone collapses. Returns the new local gluing direction.
pub fn cocone_face_cases(c: &Cocone, k: usize) -> Option<usize> {
    let j = c.local_dir();
    match k.cmp(&j) {
        std::cmp::Ordering::Less => Some(j - 1),
        std::cmp::Ordering::Greater => Some(j),
        std::cmp::Ordering::Equal => None,
    }
}

/// Face direction on a leg corresponding to face direction `k` on the apex.
pub fn apex_to_leg_dir(j: usize, k: usize) -> usize {
    if k < j {
        k
    } else {
        k + 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeArrow {
    pub dir: usize,
    pub sign: Sign,
    pub object: SketchObject,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SketchLevel {
    pub objects: Vec<SketchObject>,
    pub cocones: Vec<Cocone>,
    pub free_arrows: Vec<FreeArrow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sketch {
    pub arity: usize,
    pub levels: Vec<SketchLevel>,
}

pub fn build_sketch(x: &Divisor) -> Sketch {
    let n = x.arity;
    let mut levels = vec![SketchLevel::default(); n + 1];
    let conf = x.configuration();
    for u in x.terms.keys() {
        for sel in FaceSelector::all(n) {
            levels[sel.residual()].objects.push(SketchObject { term: u.clone(), sel });
        }
    }
    for j in 1..=n {
        let gl = x.gluing_locus(&Terminal, j).expect("direction in range");
        for g in &gl {
            for sel in FaceSelector::all(n).into_iter().filter(|s| !s.assign.contains_key(&j)) {
                let p = sel.residual();
                levels[p].cocones.push(Cocone { dir: j, left: g.left.clone(), right: g.right.clone(), sel });
            }
        }
        let srcs = conf.pre_source(j).unwrap();
        let tgts = conf.pre_target(j).unwrap();
        for (set, sign) in [(srcs, Sign::Minus), (tgts, Sign::Plus)] {
            for u in &set.coords {
                for sel in FaceSelector::all(n).into_iter().filter(|s| !s.assign.contains_key(&j)) {
                    let p = sel.residual();
                    levels[p].free_arrows.push(FreeArrow {
                        dir: j,
                        sign,
                        object: SketchObject { term: u.clone(), sel },
                    });
                }
            }
        }
    }
    for l in &mut levels {
        l.objects.sort();
        l.cocones.sort();
    }
    Sketch { arity: n, levels }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }
    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }
    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// The realization together with the cell each term's core lands on.
#[derive(Clone, Debug)]
pub struct Realization {
    pub set: CubicalSet,
    pub cores: BTreeMap<Coordinate, CellId>,
}

/// Glues one cube of the core dimension per term along the faces that
/// adjacent terms share.
pub fn realize(x: &Divisor) -> Result<Realization, String> {
    let mut nodes: Vec<(Coordinate, FaceSelector)> = Vec::new();
    let mut index: BTreeMap<(Coordinate, FaceSelector), usize> = BTreeMap::new();
    for (u, a) in &x.terms {
        for s in FaceSelector::all(a.depth()) {
            index.insert((u.clone(), s.clone()), nodes.len());
            nodes.push((u.clone(), s));
        }
    }
    let mut uf = UnionFind::new(nodes.len());
    for j in 1..=x.arity {
        for g in x.gluing_locus(&Terminal, j).map_err(|e| e.to_string())? {
            let a = &x.terms[&g.left];
            let b = &x.terms[&g.right];
            for sel in FaceSelector::all(x.arity) {
                if sel.assign.get(&j) != Some(&Sign::Plus) {
                    continue;
                }
                let mut other = sel.clone();
                other.assign.insert(j, Sign::Minus);
                let (wa, ca) = a.face_in_cube(&sel);
                let (wb, cb) = b.face_in_cube(&other);
                if wa != wb {
                    return Err(format!("terms at {} and {} disagree on a shared face", g.left, g.right));
                }
                uf.union(index[&(g.left.clone(), ca)], index[&(g.right.clone(), cb)]);
            }
        }
    }
    let mut classes: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..nodes.len() {
        classes.entry(uf.find(i)).or_default().push(i);
    }
    let max_core = x.terms.values().map(|a| a.depth()).max().unwrap_or(0);
    let mut b = CubicalSetBuilder::new(max_core);
    let mut class_id: BTreeMap<usize, CellId> = BTreeMap::new();
    for (&root, members) in &classes {
        let (u, s) = &nodes[members[0]];
        let id = b.add_cell(s.residual(), &format!("{}{}", u, s)).map_err(|e| e.to_string())?;
        class_id.insert(root, id);
    }
    for (&root, members) in &classes {
        let me = class_id[&root];
        let mut faces: BTreeMap<(usize, Sign), CellId> = BTreeMap::new();
        for &m in members {
            let (u, s) = &nodes[m];
            for k in 1..=s.residual() {
                for sg in Sign::BOTH {
                    let f = s.then(&FaceSelector::single(s.residual(), k, sg));
                    let fid = class_id[&uf.find(index[&(u.clone(), f)])];
                    if let Some(prev) = faces.insert((k, sg), fid) {
                        if prev != fid {
                            return Err(format!("face ({k},{sg}) of a glued cell is not well defined"));
                        }
                    }
                }
            }
        }
        for ((k, sg), fid) in faces {
            b.set_face(me, k, sg, fid).map_err(|e| e.to_string())?;
        }
    }
    let set = b.build().map_err(|e| e.to_string())?;
    let cores = x
        .terms
        .iter()
        .map(|(u, a)| {
            let top = FaceSelector::identity(a.depth());
            (u.clone(), class_id[&uf.find(index[&(u.clone(), top)])])
        })
        .collect();
    Ok(Realization { set, cores })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boxes::DegenerateCell;
    use crate::pastings::Pasting;

    #[test]
    fn grid_counts() {
        let a = Pasting::unit(2, DegenerateCell::identity(2));
        let row = a.compose(&Terminal, &a, 1).unwrap();
        let grid = row.compose(&Terminal, &row, 2).unwrap();
        let r = realize(&grid).unwrap();
        assert_eq!(r.set.counts(), vec![9, 12, 4]);
    }

    #[test]
    fn chain_counts() {
        let a = Pasting::unit(1, DegenerateCell::identity(1));
        let r = realize(&a.compose(&Terminal, &a, 1).unwrap()).unwrap();
        assert_eq!(r.set.counts(), vec![3, 2]);
    }
}
