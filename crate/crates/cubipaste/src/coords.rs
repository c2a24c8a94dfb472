//! Integer coordinates and configurations of them.
//!
//! Configurations are compared up to translation; operations keep absolute
//! positions since composition needs them.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoordError {
    #[error("direction {dir} out of range for arity {arity}")]
    DirectionOutOfRange { dir: usize, arity: usize },
    #[error("arity mismatch: {0} vs {1}")]
    ArityMismatch(usize, usize),
    #[error("configuration is not connected")]
    NotConnected,
    #[error("composition undefined: target and source in direction {0} differ")]
    BoundaryMismatch(usize),
    #[error("composition would place two cells at {0}")]
    Overlap(Coordinate),
    #[error("configuration is empty")]
    Empty,
}

#[derive(Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coordinate(pub SmallVec<[i64; 4]>);

impl Clone for Coordinate {
    // the derived clone pushes element by element
    fn clone(&self) -> Self {
        Coordinate(SmallVec::from_slice(&self.0))
    }
}

impl From<Vec<i64>> for Coordinate {
    fn from(v: Vec<i64>) -> Self {
        Coordinate(SmallVec::from_vec(v))
    }
}

impl Coordinate {
    pub fn new(v: &[i64]) -> Self {
        Coordinate(SmallVec::from_slice(v))
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn contract(&self, j: usize) -> Result<Coordinate, CoordError> {
        check_dir(j, self.arity())?;
        let mut v = SmallVec::with_capacity(self.0.len() - 1);
        v.extend_from_slice(&self.0[..j - 1]);
        v.extend_from_slice(&self.0[j..]);
        Ok(Coordinate(v))
    }

    pub fn dilate(&self, j: usize) -> Result<Coordinate, CoordError> {
        self.insert(j, 1)
    }

    /// Inserts `depth` at position `j`.
    pub fn insert(&self, j: usize, depth: i64) -> Result<Coordinate, CoordError> {
        check_dir(j, self.arity() + 1)?;
        let mut v = self.0.clone();
        v.insert(j - 1, depth);
        Ok(Coordinate(v))
    }

    pub fn shifted(&self, offset: &[i64]) -> Coordinate {
        Coordinate(self.0.iter().zip(offset).map(|(a, b)| a + b).collect())
    }

    /// The single direction in which two coordinates differ, if exactly one.
    pub fn adjacent_dir(&self, other: &Coordinate) -> Option<usize> {
        let diff: Vec<usize> = (0..self.arity()).filter(|&i| self.0[i] != other.0[i]).collect();
        (diff.len() == 1).then(|| diff[0] + 1)
    }
}

impl fmt::Display for Coordinate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", v.join(","))
    }
}

fn check_dir(j: usize, arity: usize) -> Result<(), CoordError> {
    if j == 0 || j > arity {
        Err(CoordError::DirectionOutOfRange { dir: j, arity })
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Configuration {
    pub arity: usize,
    pub coords: BTreeSet<Coordinate>,
}

impl Configuration {
    pub fn new(arity: usize, coords: impl IntoIterator<Item = Coordinate>) -> Result<Self, CoordError> {
        let coords: BTreeSet<Coordinate> = coords.into_iter().collect();
        for c in &coords {
            if c.arity() != arity {
                return Err(CoordError::ArityMismatch(c.arity(), arity));
            }
        }
        Ok(Configuration { arity, coords })
    }

    pub fn from_vecs(arity: usize, v: &[&[i64]]) -> Self {
        Self::new(arity, v.iter().map(|c| Coordinate::new(c))).expect("consistent arity")
    }

    pub fn singleton(c: Coordinate) -> Self {
        Configuration { arity: c.arity(), coords: [c].into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn min_vector(&self) -> Vec<i64> {
        (0..self.arity).map(|i| self.coords.iter().map(|c| c.0[i]).min().unwrap_or(1)).collect()
    }

    pub fn max_vector(&self) -> Vec<i64> {
        (0..self.arity).map(|i| self.coords.iter().map(|c| c.0[i]).max().unwrap_or(1)).collect()
    }

    /// Offset translating this configuration to minimum depth 1 everywhere.
    pub fn normalizing_offset(&self) -> Vec<i64> {
        self.min_vector().iter().map(|m| 1 - m).collect()
    }

    pub fn translate(&self, offset: &[i64]) -> Configuration {
        Configuration { arity: self.arity, coords: self.coords.iter().map(|c| c.shifted(offset)).collect() }
    }

    pub fn normalized(&self) -> Configuration {
        self.translate(&self.normalizing_offset())
    }

    pub fn equivalent(&self, other: &Configuration) -> bool {
        self.arity == other.arity && self.normalized() == other.normalized()
    }

    /// Adjacency: equal after contracting one direction.
    pub fn neighbours(&self, c: &Coordinate) -> Vec<Coordinate> {
        self.coords.iter().filter(|d| c.adjacent_dir(d).is_some()).cloned().collect()
    }

    /// Connectedness with a spanning tree given as parent links.
    pub fn connectivity(&self) -> (bool, BTreeMap<Coordinate, Option<Coordinate>>) {
        let mut tree = BTreeMap::new();
        let Some(first) = self.coords.iter().next() else { return (true, tree) };
        tree.insert(first.clone(), None);
        let mut q = VecDeque::from([first.clone()]);
        while let Some(c) = q.pop_front() {
            for d in self.neighbours(&c) {
                if !tree.contains_key(&d) {
                    tree.insert(d.clone(), Some(c.clone()));
                    q.push_back(d);
                }
            }
        }
        (tree.len() == self.coords.len(), tree)
    }

    pub fn is_connected(&self) -> bool {
        self.connectivity().0
    }

    /// Zigzag from the root of the spanning tree to `c`.
    pub fn witness_path(&self, c: &Coordinate) -> Option<Vec<Coordinate>> {
        let (_, tree) = self.connectivity();
        let mut path = vec![c.clone()];
        let mut cur = tree.get(c)?.clone();
        while let Some(p) = cur {
            path.push(p.clone());
            cur = tree[&p].clone();
        }
        path.reverse();
        Some(path)
    }

    /// Classes of coordinates agreeing outside direction `j`, keyed by the contraction.
    pub fn partitions(&self, j: usize) -> Result<BTreeMap<Coordinate, BTreeSet<Coordinate>>, CoordError> {
        check_dir(j, self.arity)?;
        let mut m: BTreeMap<Coordinate, BTreeSet<Coordinate>> = BTreeMap::new();
        for c in &self.coords {
            m.entry(c.contract(j)?).or_default().insert(c.clone());
        }
        Ok(m)
    }

    fn pick(&self, j: usize, max: bool) -> Result<Configuration, CoordError> {
        let parts = self.partitions(j)?;
        let coords = parts
            .values()
            .map(|p| {
                let it = p.iter().cloned();
                if max {
                    it.max_by_key(|c| c.0[j - 1]).unwrap()
                } else {
                    it.min_by_key(|c| c.0[j - 1]).unwrap()
                }
            })
            .collect();
        Ok(Configuration { arity: self.arity, coords })
    }

    pub fn pre_source(&self, j: usize) -> Result<Configuration, CoordError> {
        self.pick(j, false)
    }

    pub fn pre_target(&self, j: usize) -> Result<Configuration, CoordError> {
        self.pick(j, true)
    }

    pub fn contract_all(&self, j: usize) -> Result<Configuration, CoordError> {
        check_dir(j, self.arity)?;
        Configuration::new(self.arity - 1, self.coords.iter().map(|c| c.contract(j).unwrap()))
    }

    pub fn source(&self, j: usize) -> Result<Configuration, CoordError> {
        self.pre_source(j)?.contract_all(j)
    }

    pub fn target(&self, j: usize) -> Result<Configuration, CoordError> {
        self.pre_target(j)?.contract_all(j)
    }

    pub fn dilate(&self, j: usize) -> Result<Configuration, CoordError> {
        check_dir(j, self.arity + 1)?;
        let out = Configuration::new(self.arity + 1, self.coords.iter().map(|c| c.dilate(j).unwrap()))?;
        debug_assert_eq!(out.is_connected(), self.is_connected());
        Ok(out)
    }

    /// Coordinates with no immediate predecessor (or successor) in direction
    /// `j`, contracted by `j`.
    pub fn domain(&self, j: usize) -> Result<Configuration, CoordError> {
        self.boundary_scan(j, -1)
    }

    pub fn codomain(&self, j: usize) -> Result<Configuration, CoordError> {
        self.boundary_scan(j, 1)
    }

    fn boundary_scan(&self, j: usize, step: i64) -> Result<Configuration, CoordError> {
        check_dir(j, self.arity)?;
        let mut v = Vec::new();
        for c in &self.coords {
            let mut d = c.clone();
            d.0[j - 1] += step;
            if !self.coords.contains(&d) {
                v.push(c.contract(j)?);
            }
        }
        Configuration::new(self.arity - 1, v)
    }

    /// Every direction's depth set is an interval and all combinations occur.
    pub fn is_rectangular(&self) -> bool {
        if self.coords.is_empty() {
            return false;
        }
        let lo = self.min_vector();
        let hi = self.max_vector();
        let vol: i64 = lo.iter().zip(&hi).map(|(a, b)| b - a + 1).product();
        vol == self.coords.len() as i64
    }

    pub fn extents(&self) -> Vec<usize> {
        let lo = self.min_vector();
        let hi = self.max_vector();
        lo.iter().zip(&hi).map(|(a, b)| (b - a + 1) as usize).collect()
    }

    /// Translation placing `next` after `self` in direction `j`, per
    /// partition. Returns the map from coordinates of `next` to new positions.
    pub fn composition_moves(
        &self,
        next: &Configuration,
        j: usize,
    ) -> Result<BTreeMap<Coordinate, Coordinate>, CoordError> {
        if self.arity != next.arity {
            return Err(CoordError::ArityMismatch(self.arity, next.arity));
        }
        check_dir(j, self.arity)?;
        let tgt = self.target(j)?;
        let src = next.source(j)?;
        if !tgt.equivalent(&src) {
            return Err(CoordError::BoundaryMismatch(j));
        }
        // align directions other than j
        let lo_t = tgt.min_vector();
        let lo_s = src.min_vector();
        let mut offset: Vec<i64> = lo_t.iter().zip(&lo_s).map(|(a, b)| a - b).collect();
        offset.insert(j - 1, 0);
        let mine = self.partitions(j)?;
        let theirs = next.translate(&offset).partitions(j)?;
        let mut moves = BTreeMap::new();
        for (key, part) in &theirs {
            let host = mine.get(key).ok_or(CoordError::BoundaryMismatch(j))?;
            let top = host.iter().map(|c| c.0[j - 1]).max().unwrap();
            let bottom = part.iter().map(|c| c.0[j - 1]).min().unwrap();
            let shift = top + 1 - bottom;
            for c in part {
                let mut d = c.clone();
                d.0[j - 1] += shift;
                let mut orig = c.clone();
                for (k, o) in offset.iter().enumerate() {
                    orig.0[k] -= o;
                }
                moves.insert(orig, d);
            }
        }
        Ok(moves)
    }

    pub fn compose(&self, next: &Configuration, j: usize) -> Result<Configuration, CoordError> {
        let moves = self.composition_moves(next, j)?;
        let mut coords = self.coords.clone();
        for d in moves.into_values() {
            if !coords.insert(d.clone()) {
                return Err(CoordError::Overlap(d));
            }
        }
        let out = Configuration { arity: self.arity, coords };
        debug_assert!(!self.is_connected() || !next.is_connected() || out.is_connected());
        Ok(out)
    }

    /// Full box with the given extents starting at depth 1.
    pub fn grid(extents: &[usize]) -> Configuration {
        let mut coords = vec![Vec::new()];
        for &e in extents {
            coords = coords
                .into_iter()
                .flat_map(|c: Vec<i64>| {
                    (1..=e as i64).map(move |k| {
                        let mut d = c.clone();
                        d.push(k);
                        d
                    })
                })
                .collect();
        }
        Configuration { arity: extents.len(), coords: coords.into_iter().map(Coordinate::from).collect() }
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", v.join(","))
    }
}

/// Connected configurations of arity `n` with at most `max` coordinates,
/// normalized. Gaps between occupied depths are at most one empty depth.
pub fn connected_configurations(n: usize, max: usize) -> Vec<Configuration> {
    let mut seen: BTreeSet<Configuration> = BTreeSet::new();
    let mut layer: Vec<Configuration> = vec![Configuration::singleton(Coordinate::from(vec![1; n]))];
    seen.extend(layer.iter().cloned());
    for _ in 1..max {
        let mut next = Vec::new();
        for c in &layer {
            let lo = c.min_vector();
            let hi = c.max_vector();
            let mut cands = BTreeSet::new();
            for x in &c.coords {
                for d in 0..n {
                    for v in (lo[d] - 2)..=(hi[d] + 2) {
                        let mut y = x.clone();
                        y.0[d] = v;
                        if !c.coords.contains(&y) {
                            cands.insert(y);
                        }
                    }
                }
            }
            for y in cands {
                let mut e = c.clone();
                e.coords.insert(y);
                let e = e.normalized();
                if !has_small_gaps(&e) {
                    continue;
                }
                if seen.insert(e.clone()) {
                    next.push(e);
                }
            }
        }
        layer = next;
    }
    seen.into_iter().collect()
}

fn has_small_gaps(c: &Configuration) -> bool {
    (0..c.arity).all(|d| {
        let depths: BTreeSet<i64> = c.coords.iter().map(|x| x.0[d]).collect();
        depths.iter().zip(depths.iter().skip(1)).all(|(a, b)| b - a <= 2)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compose_examples() {
        let c = Configuration::from_vecs(1, &[&[1]]);
        assert_eq!(c.compose(&c, 1).unwrap(), Configuration::from_vecs(1, &[&[1], &[2]]));
        let r = Configuration::from_vecs(2, &[&[1, 1], &[2, 1]]);
        assert_eq!(r.compose(&r, 2).unwrap(), Configuration::grid(&[2, 2]));
    }

    #[test]
    fn domain_example() {
        let c = Configuration::from_vecs(2, &[&[1, 1], &[2, 1], &[1, 2]]);
        assert_eq!(c.domain(1).unwrap(), Configuration::from_vecs(1, &[&[1], &[2]]));
    }

    #[test]
    fn disconnected() {
        assert!(!Configuration::from_vecs(2, &[&[1, 1], &[3, 3]]).is_connected());
    }
}
