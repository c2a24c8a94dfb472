//! Degenerate cells of the terminal reflexive set, links and boxes.

use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, LazyLock, Mutex, OnceLock};

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::coords::Coordinate;
use crate::cubical::{normalize_zigzag, FaceSelector, Sign};
use crate::words::{Letter, Word, WordError};

/// One shared node per normal-form word, so equal cells share a pointer and
/// carry their faces and degeneracies with them.
struct Node {
    word: Word,
    /// Indexed by `2 * (dir - 1) + (sign == Plus)`.
    faces: OnceLock<Vec<DegenerateCell>>,
    applied: Mutex<Vec<(Letter, DegenerateCell)>>,
}

static INTERNER: LazyLock<Mutex<FxHashMap<Word, DegenerateCell>>> = LazyLock::new(Default::default);

fn intern(word: Word) -> DegenerateCell {
    let mut map = INTERNER.lock().expect("interner poisoned");
    if let Some(c) = map.get(&word) {
        return c.clone();
    }
    let cell = DegenerateCell {
        node: Arc::new(Node { word: word.clone(), faces: OnceLock::new(), applied: Mutex::new(Vec::new()) }),
    };
    map.insert(word, cell.clone());
    cell
}

/// A degenerate cell of dimension `word.target()` over a `word.source`-cell.
/// Always stored in normal form.
#[derive(Clone, Serialize, Deserialize)]
#[serde(into = "CellRepr", try_from = "CellRepr")]
pub struct DegenerateCell {
    node: Arc<Node>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename = "DegenerateCell")]
struct CellRepr {
    word: Word,
}

impl From<DegenerateCell> for CellRepr {
    fn from(c: DegenerateCell) -> Self {
        CellRepr { word: c.node.word.clone() }
    }
}

impl TryFrom<CellRepr> for DegenerateCell {
    type Error = WordError;
    fn try_from(r: CellRepr) -> Result<Self, WordError> {
        DegenerateCell::new(&r.word)
    }
}

impl PartialEq for DegenerateCell {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.node, &other.node)
    }
}

impl Eq for DegenerateCell {}

impl PartialOrd for DegenerateCell {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for DegenerateCell {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self == other {
            std::cmp::Ordering::Equal
        } else {
            self.node.word.cmp(&other.node.word)
        }
    }
}

impl Hash for DegenerateCell {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.node.word.hash(state)
    }
}

impl fmt::Debug for DegenerateCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DegenerateCell").field("word", &self.node.word).finish()
    }
}

impl DegenerateCell {
    pub fn identity(n: usize) -> Self {
        intern(Word::empty(n))
    }

    pub fn new(word: &Word) -> Result<Self, WordError> {
        word.validate()?;
        Ok(intern(word.normalize()))
    }

    pub fn parse(text: &str, dim: usize) -> Result<Self, WordError> {
        Self::new(&Word::parse(text, dim)?)
    }

    pub fn word(&self) -> &Word {
        &self.node.word
    }

    pub fn dim(&self) -> usize {
        self.node.word.target()
    }

    /// Dimension of the underlying non-degenerate cell.
    pub fn depth(&self) -> usize {
        self.node.word.source
    }

    pub fn is_identity(&self) -> bool {
        self.node.word.is_empty()
    }

    pub fn apply(&self, l: Letter) -> Self {
        let mut applied = self.node.applied.lock().expect("cell cache poisoned");
        if let Some((_, c)) = applied.iter().find(|(k, _)| *k == l) {
            return c.clone();
        }
        let c = intern(self.node.word.then(l).normalize());
        applied.push((l, c.clone()));
        c
    }

    pub fn face(&self, dir: usize, sign: Sign) -> Self {
        let faces = self.node.faces.get_or_init(|| {
            (1..=self.dim()).flat_map(|d| Sign::BOTH.map(|s| intern(self.node.word.face(d, s).0))).collect()
        });
        faces[2 * (dir - 1) + (sign == Sign::Plus) as usize].clone()
    }

    /// Face together with the face of the underlying cube it lands on.
    pub fn face_in_cube(&self, sel: &FaceSelector) -> (Self, FaceSelector) {
        let (w, s) = self.node.word.select(sel);
        (intern(w), s)
    }
}

impl fmt::Display for DegenerateCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(1_{})", self.node.word, self.node.word.source)
    }
}

/// A path of face operations starting at a coordinate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Link {
    pub base: Coordinate,
    pub steps: Vec<(usize, Sign)>,
}

/// Where a link ends: the surviving original directions with their
/// coordinates, plus the sign of the last step.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TerminalElement {
    pub coordinate: Vec<(usize, i64)>,
    pub last_sign: Option<Sign>,
}

impl Link {
    pub fn new(base: Coordinate, steps: Vec<(usize, Sign)>) -> Self {
        Link { base, steps }
    }

    pub fn arity(&self) -> usize {
        self.base.arity()
    }

    /// Parses steps written as `s2 t1 ...` (`s` for minus, `t` for plus).
    pub fn parse_steps(text: &str) -> Option<Vec<(usize, Sign)>> {
        text.split_whitespace()
            .map(|tok| {
                let (s, rest) = tok.split_at(1);
                let sign = match s {
                    "s" => Sign::Minus,
                    "t" => Sign::Plus,
                    _ => return None,
                };
                rest.parse().ok().map(|d| (d, sign))
            })
            .collect()
    }

    pub fn selector(&self) -> Option<FaceSelector> {
        normalize_zigzag(self.arity(), &self.steps)
    }

    pub fn terminal(&self) -> Option<TerminalElement> {
        let sel = self.selector()?;
        let coordinate = sel.free_dirs().into_iter().map(|d| (d, self.base.0[d - 1])).collect();
        Some(TerminalElement { coordinate, last_sign: self.steps.last().map(|s| s.1) })
    }
}

/// Two links are congruent when they start at the same coordinate, have the
/// same length and normalize to the same selector.
pub fn links_congruent(a: &Link, b: &Link) -> bool {
    a.base == b.base && a.steps.len() == b.steps.len() && a.selector().is_some() && a.selector() == b.selector()
}

/// The standard cube at a coordinate decorated by a degenerate cell, with
/// faces identified when the cell's corresponding faces coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegenerateBox {
    pub coord: Coordinate,
    pub cell: DegenerateCell,
    /// Class label for each selector of the cube.
    pub classes: BTreeMap<FaceSelector, usize>,
}

impl DegenerateBox {
    pub fn new(coord: Coordinate, cell: DegenerateCell) -> Self {
        let n = cell.dim();
        let mut seen: BTreeMap<(usize, DegenerateCell, FaceSelector), usize> = BTreeMap::new();
        let mut classes = BTreeMap::new();
        for sel in FaceSelector::all(n) {
            let key = cell.face_in_cube(&sel);
            let next = seen.len();
            let id = *seen.entry((sel.residual(), key.0, key.1)).or_insert(next);
            classes.insert(sel, id);
        }
        DegenerateBox { coord, cell, classes }
    }

    pub fn identified(&self, a: &FaceSelector, b: &FaceSelector) -> bool {
        self.classes[a] == self.classes[b]
    }

    pub fn is_discrete(&self) -> bool {
        let mut v: Vec<usize> = self.classes.values().copied().collect();
        v.sort();
        v.dedup();
        v.len() == self.classes.len()
    }

    /// Partition of the selectors as sorted lists of patterns.
    pub fn partition(&self) -> Vec<Vec<String>> {
        let mut groups: BTreeMap<usize, Vec<String>> = BTreeMap::new();
        for (s, &c) in &self.classes {
            groups.entry(c).or_default().push(s.pattern());
        }
        let mut out: Vec<Vec<String>> = groups.into_values().collect();
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_box_is_discrete() {
        let b = DegenerateBox::new(Coordinate::new(&[1, 1]), DegenerateCell::identity(2));
        assert!(b.is_discrete());
    }

    #[test]
    fn degenerate_box_identifies_collapsed_faces() {
        let c = DegenerateCell::parse("e1", 2).unwrap();
        let b = DegenerateBox::new(Coordinate::new(&[1, 1]), c);
        let m = FaceSelector::from_pattern("-*").unwrap();
        let p = FaceSelector::from_pattern("+*").unwrap();
        assert!(b.identified(&m, &p));
        let m2 = FaceSelector::from_pattern("*-").unwrap();
        let p2 = FaceSelector::from_pattern("*+").unwrap();
        assert!(!b.identified(&m2, &p2));
    }
}
