//! Cubical coherators: free reflexive magma terms over a finite cubical set,
//! their faces, lifts of admissible pairs and bounded level generation.
//!
//! Composition is diagrammatic: `comp(n, j, a, b)` has `a` first in
//! direction `j`. Lifts are identified structurally by kind, direction and
//! the pair they fill.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::cubical::{CellId, CubicalSet, CubicalSetBuilder, Sign};
use crate::lifting::{generate_levels, verify_levels, Induction, LiftingTheory, Level, PairRecord};
use crate::words::{normal_words, push_face_symbolic, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum LiftKind {
    Plain(usize),
    Minus(usize),
    Plus(usize),
}

impl fmt::Display for LiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LiftKind::Plain(j) => write!(f, "plain{j}"),
            LiftKind::Minus(j) => write!(f, "minus{j}"),
            LiftKind::Plus(j) => write!(f, "plus{j}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LiftCell {
    pub kind: LiftKind,
    pub f: Term,
    pub g: Term,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Gen(CellId),
    Comp { dim: usize, dir: usize, a: Arc<Term>, b: Arc<Term> },
    Deg { word: Word, x: Arc<Term> },
    Rev { dir: usize, x: Arc<Term> },
    Lift(Arc<LiftCell>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("direction {dir} out of range for dimension {dim}")]
    Direction { dir: usize, dim: usize },
    #[error("composition in direction {0}: target of the first does not match source of the second")]
    NotComposable(usize),
    #[error("dimensions differ")]
    Dimension,
    #[error("pair ({0}, {1}) cannot be lifted: {2}")]
    NotLiftable(String, String, String),
}

impl Term {
    pub fn dim(&self) -> usize {
        match self {
            Term::Gen(c) => c.dim,
            Term::Comp { dim, .. } => *dim,
            Term::Deg { word, .. } => word.target(),
            Term::Rev { x, .. } => x.dim(),
            Term::Lift(l) => l.f.dim() + 1,
        }
    }

    /// Leaves plus letters plus reversors; lifts count as leaves.
    pub fn size(&self) -> usize {
        match self {
            Term::Gen(_) | Term::Lift(_) => 1,
            Term::Comp { a, b, .. } => a.size() + b.size(),
            Term::Deg { word, x } => word.letters.len() + x.size(),
            Term::Rev { x, .. } => 1 + x.size(),
        }
    }

    pub fn is_bare(&self) -> bool {
        match self {
            Term::Gen(_) => true,
            Term::Deg { x, .. } => matches!(**x, Term::Gen(_)),
            _ => false,
        }
    }

    pub fn has_lift(&self) -> bool {
        match self {
            Term::Gen(_) => false,
            Term::Lift(_) => true,
            Term::Comp { a, b, .. } => a.has_lift() || b.has_lift(),
            Term::Deg { x, .. } | Term::Rev { x, .. } => x.has_lift(),
        }
    }

    /// Applies a word, merging with an existing outer word.
    pub fn degenerate(word: &Word, x: Term) -> Term {
        assert_eq!(word.source, x.dim());
        if word.is_empty() {
            return x;
        }
        match x {
            Term::Deg { word: inner, x: y } => Term::Deg { word: word.after(&inner).normalize(), x: y },
            other => Term::Deg { word: word.normalize(), x: Arc::new(other) },
        }
    }

    pub fn render(&self, base: &CubicalSet) -> String {
        match self {
            Term::Gen(c) => base.name(*c).to_string(),
            Term::Comp { dir, a, b, .. } => format!("({} ;{} {})", a.render(base), dir, b.render(base)),
            Term::Deg { word, x } => format!("{}({})", word.text(), x.render(base)),
            Term::Rev { dir, x } => format!("rev{}({})", dir, x.render(base)),
            Term::Lift(l) => {
                let (open, close, tag) = match l.kind {
                    LiftKind::Plain(j) => ("[", "]", format!("_{j}")),
                    LiftKind::Minus(j) => ("[", "]", format!("-_{j}")),
                    LiftKind::Plus(j) => ("[", "]", format!("+_{j}")),
                };
                format!("{}{}, {}{}{}", open, l.f.render(base), l.g.render(base), close, tag)
            }
        }
    }
}

/// The magma over a cubical set, optionally with reversors.
#[derive(Clone, Debug)]
pub struct Magma {
    pub base: CubicalSet,
    pub reversors: bool,
    pub max_dim: usize,
    pub max_size: usize,
}

impl Magma {
    pub fn face(&self, t: &Term, i: usize, s: Sign) -> Term {
        let n = t.dim();
        assert!(i >= 1 && i <= n, "face {i} of a {n}-term");
        match t {
            Term::Gen(c) => Term::Gen(self.base.face(*c, i, s)),
            Term::Comp { dim, dir, a, b } => {
                let j = *dir;
                if i == j {
                    match s {
                        Sign::Minus => self.face(a, j, s),
                        Sign::Plus => self.face(b, j, s),
                    }
                } else {
                    let j2 = if i < j { j - 1 } else { j };
                    Term::Comp {
                        dim: dim - 1,
                        dir: j2,
                        a: Arc::new(self.face(a, i, s)),
                        b: Arc::new(self.face(b, i, s)),
                    }
                }
            }
            Term::Deg { word, x } => {
                let (w, rest) = push_face_symbolic(word, i, s);
                let core = match rest {
                    Some((d, s2)) => self.face(x, d, s2),
                    None => (**x).clone(),
                };
                Term::degenerate(&w.normalize(), core)
            }
            Term::Rev { dir, x } => {
                let j = *dir;
                if i == j {
                    self.face(x, j, s.flip())
                } else {
                    let j2 = if i < j { j - 1 } else { j };
                    Term::Rev { dir: j2, x: Arc::new(self.face(x, i, s)) }
                }
            }
            Term::Lift(l) => self.lift_face(l, i, s),
        }
    }

    fn lift_face(&self, l: &LiftCell, i: usize, s: Sign) -> Term {
        let fi = |k: usize, sg: Sign| (self.face(&l.f, k, sg), self.face(&l.g, k, sg));
        let must = |r: Result<Term, TermError>| r.expect("lift boundaries were checked at creation");
        match l.kind {
            LiftKind::Plain(j) => {
                if i == j {
                    return match s {
                        Sign::Minus => l.f.clone(),
                        Sign::Plus => l.g.clone(),
                    };
                }
                let (k, j2) = if i < j { (i, j - 1) } else { (i - 1, j) };
                let (a, b) = fi(k, s);
                must(self.lift(LiftKind::Plain(j2), &a, &b))
            }
            LiftKind::Minus(j) | LiftKind::Plus(j) => {
                let minus = matches!(l.kind, LiftKind::Minus(_));
                let fixed = if minus { Sign::Minus } else { Sign::Plus };
                if i == j || i == j + 1 {
                    if s == fixed {
                        return if i == j { l.f.clone() } else { l.g.clone() };
                    }
                    let (a, b) = fi(j, s);
                    return must(self.lift(LiftKind::Plain(j), &a, &b));
                }
                let (k, j2) = if i < j { (i, j - 1) } else { (i - 1, j) };
                let (a, b) = fi(k, s);
                let kind = if minus { LiftKind::Minus(j2) } else { LiftKind::Plus(j2) };
                must(self.lift(kind, &a, &b))
            }
        }
    }

    /// Lift of a pair; equal pairs lift to degeneracies.
    pub fn lift(&self, kind: LiftKind, f: &Term, g: &Term) -> Result<Term, TermError> {
        let n = f.dim();
        if g.dim() != n {
            return Err(TermError::Dimension);
        }
        let (j, max_j) = match kind {
            LiftKind::Plain(j) => (j, n + 1),
            LiftKind::Minus(j) | LiftKind::Plus(j) => (j, n),
        };
        if j == 0 || j > max_j {
            return Err(TermError::Direction { dir: j, dim: n });
        }
        if f == g {
            let letter = match kind {
                LiftKind::Plain(j) => Letter::deg(j),
                LiftKind::Minus(j) => Letter::conn(Sign::Minus, j),
                LiftKind::Plus(j) => Letter::conn(Sign::Plus, j),
            };
            return Ok(Term::degenerate(&Word { source: n, letters: vec![letter] }, f.clone()));
        }
        let bad = |why: &str| TermError::NotLiftable(f.render(&self.base), g.render(&self.base), why.to_string());
        if f.is_bare() && g.is_bare() {
            return Err(bad("both arrows are bare"));
        }
        // every boundary pair must itself be liftable
        let cell = LiftCell { kind, f: f.clone(), g: g.clone() };
        match kind {
            LiftKind::Plain(j) => {
                for i in 1..=n + 1 {
                    if i == j {
                        continue;
                    }
                    let (k, j2) = if i < j { (i, j - 1) } else { (i - 1, j) };
                    for s in Sign::BOTH {
                        self.lift(LiftKind::Plain(j2), &self.face(f, k, s), &self.face(g, k, s))?;
                    }
                }
            }
            LiftKind::Minus(j) | LiftKind::Plus(j) => {
                let minus = matches!(kind, LiftKind::Minus(_));
                let other = if minus { Sign::Plus } else { Sign::Minus };
                // j-parallel
                for s in Sign::BOTH {
                    if self.face(f, j, s) != self.face(g, j, s) {
                        return Err(bad("not parallel in the lift direction"));
                    }
                }
                self.lift(LiftKind::Plain(j), &self.face(f, j, other), &self.face(g, j, other))?;
                for i in 1..=n + 1 {
                    if i == j || i == j + 1 {
                        continue;
                    }
                    let (k, j2) = if i < j { (i, j - 1) } else { (i - 1, j) };
                    let kk = if minus { LiftKind::Minus(j2) } else { LiftKind::Plus(j2) };
                    for s in Sign::BOTH {
                        self.lift(kk, &self.face(f, k, s), &self.face(g, k, s))?;
                    }
                }
            }
        }
        Ok(Term::Lift(Arc::new(cell)))
    }

    pub fn compose(&self, dir: usize, a: &Term, b: &Term) -> Result<Term, TermError> {
        let n = a.dim();
        if b.dim() != n {
            return Err(TermError::Dimension);
        }
        if dir == 0 || dir > n {
            return Err(TermError::Direction { dir, dim: n });
        }
        if self.face(a, dir, Sign::Plus) != self.face(b, dir, Sign::Minus) {
            return Err(TermError::NotComposable(dir));
        }
        Ok(Term::Comp { dim: n, dir, a: Arc::new(a.clone()), b: Arc::new(b.clone()) })
    }

    /// All faces in order `(1,-), (1,+), (2,-), ...`.
    pub fn faces(&self, t: &Term) -> Vec<Term> {
        let n = t.dim();
        (1..=n).flat_map(|i| Sign::BOTH.map(|s| self.face(t, i, s))).collect()
    }

    /// Violations of the cubical identities on the faces of `t`.
    pub fn identity_violations(&self, t: &Term) -> Vec<String> {
        let n = t.dim();
        let mut out = Vec::new();
        for j in 2..=n {
            for i in 1..j {
                for a in Sign::BOTH {
                    for b in Sign::BOTH {
                        let l = self.face(&self.face(t, j, b), i, a);
                        let r = self.face(&self.face(t, i, a), j - 1, b);
                        if l != r {
                            out.push(format!(
                                "{}: face({i},{a}) of face({j},{b}) is {} but face({},{b}) of face({i},{a}) is {}",
                                t.render(&self.base),
                                l.render(&self.base),
                                j - 1,
                                r.render(&self.base)
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Defining equations of a lift, checked by evaluation.
    pub fn lift_violations(&self, t: &Term) -> Vec<String> {
        let Term::Lift(l) = t else { return Vec::new() };
        let mut out = self.identity_violations(t);
        let r = |x: &Term| x.render(&self.base);
        let mut expect = |i: usize, s: Sign, want: &Term| {
            let got = self.face(t, i, s);
            if got != *want {
                out.push(format!("{}: face({i},{s}) is {} instead of {}", r(t), r(&got), r(want)));
            }
        };
        match l.kind {
            LiftKind::Plain(j) => {
                expect(j, Sign::Minus, &l.f);
                expect(j, Sign::Plus, &l.g);
            }
            LiftKind::Minus(j) => {
                expect(j, Sign::Minus, &l.f);
                expect(j + 1, Sign::Minus, &l.g);
                let p = self
                    .lift(LiftKind::Plain(j), &self.face(&l.f, j, Sign::Plus), &self.face(&l.g, j, Sign::Plus))
                    .expect("checked");
                expect(j, Sign::Plus, &p);
                expect(j + 1, Sign::Plus, &p);
            }
            LiftKind::Plus(j) => {
                expect(j, Sign::Plus, &l.f);
                expect(j + 1, Sign::Plus, &l.g);
                let p = self
                    .lift(LiftKind::Plain(j), &self.face(&l.f, j, Sign::Minus), &self.face(&l.g, j, Sign::Minus))
                    .expect("checked");
                expect(j, Sign::Minus, &p);
                expect(j + 1, Sign::Minus, &p);
            }
        }
        out
    }

    /// Corner vertices in a fixed order; equal corners are necessary for a lift.
    pub fn corners(&self, t: &Term) -> Vec<Term> {
        if t.dim() == 0 {
            return vec![t.clone()];
        }
        let mut out = self.corners(&self.face(t, 1, Sign::Minus));
        out.extend(self.corners(&self.face(t, 1, Sign::Plus)));
        out
    }

    /// All level-0 terms within bounds, sorted.
    pub fn enumerate(&self) -> Vec<Term> {
        let mut by_size: Vec<Vec<Term>> = vec![Vec::new(); self.max_size + 1];
        if self.max_size == 0 {
            return Vec::new();
        }
        for c in self.base.all_cells() {
            if c.dim <= self.max_dim {
                by_size[1].push(Term::Gen(c));
            }
        }
        let mut words: HashMap<(usize, usize), Vec<Word>> = HashMap::new();
        for s in 2..=self.max_size {
            let mut found: BTreeSet<Term> = BTreeSet::new();
            // degeneracies of non-degenerate terms
            for k in 1..s {
                for x in &by_size[s - k] {
                    if matches!(x, Term::Deg { .. }) || x.dim() + k > self.max_dim {
                        continue;
                    }
                    let p = x.dim();
                    let ws = words.entry((p, p + k)).or_insert_with(|| normal_words(p, p + k, true));
                    for w in ws.iter() {
                        found.insert(Term::Deg { word: w.clone(), x: Arc::new(x.clone()) });
                    }
                }
            }
            if self.reversors {
                for x in &by_size[s - 1] {
                    for j in 1..=x.dim() {
                        found.insert(Term::Rev { dir: j, x: Arc::new(x.clone()) });
                    }
                }
            }
            // compositions, indexed by source faces
            for sa in 1..s {
                let sb = s - sa;
                let mut index: HashMap<(usize, usize, Term), Vec<&Term>> = HashMap::new();
                for b in &by_size[sb] {
                    for j in 1..=b.dim() {
                        index.entry((b.dim(), j, self.face(b, j, Sign::Minus))).or_default().push(b);
                    }
                }
                for a in &by_size[sa] {
                    for j in 1..=a.dim() {
                        if let Some(bs) = index.get(&(a.dim(), j, self.face(a, j, Sign::Plus))) {
                            for b in bs {
                                found.insert(Term::Comp {
                                    dim: a.dim(),
                                    dir: j,
                                    a: Arc::new(a.clone()),
                                    b: Arc::new((*b).clone()),
                                });
                            }
                        }
                    }
                }
            }
            by_size[s] = found.into_iter().collect();
        }
        let mut all: Vec<Term> = by_size.into_iter().flatten().collect();
        all.sort();
        all
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Gen(c) => write!(f, "x{}_{}", c.dim, c.idx),
            Term::Comp { dir, a, b, .. } => write!(f, "({a} ;{dir} {b})"),
            Term::Deg { word, x } => write!(f, "{}({x})", word.text()),
            Term::Rev { dir, x } => write!(f, "rev{dir}({x})"),
            Term::Lift(l) => write!(f, "[{}, {}]{}", l.f, l.g, l.kind),
        }
    }
}

/// The magma as a lifting theory; terms render with generator indices.
pub struct CubicalTheory {
    pub magma: Magma,
}

impl LiftingTheory for CubicalTheory {
    type Term = Term;
    type Kind = LiftKind;

    fn dim(&self, t: &Term) -> usize {
        t.dim()
    }
    fn is_bare(&self, t: &Term) -> bool {
        t.is_bare()
    }
    fn parallel_key(&self, t: &Term) -> Vec<Term> {
        self.magma.corners(t)
    }
    fn kinds(&self, f: &Term, g: &Term) -> Vec<LiftKind> {
        let n = f.dim();
        let mut out = Vec::new();
        for j in 1..=n + 1 {
            out.push(LiftKind::Plain(j));
        }
        for j in 1..=n {
            out.push(LiftKind::Minus(j));
            out.push(LiftKind::Plus(j));
        }
        out.retain(|k| self.magma.lift(*k, f, g).is_ok());
        out
    }
    fn lift(&self, kind: &LiftKind, f: &Term, g: &Term) -> Result<Term, String> {
        self.magma.lift(*kind, f, g).map_err(|e| e.to_string())
    }
    fn verify_lift(&self, t: &Term) -> Vec<String> {
        self.magma.lift_violations(t)
    }
    fn close(&self, atoms: &[Term]) -> Vec<Term> {
        let mut out = Vec::new();
        for a in atoms {
            for k in 1..self.magma.max_size {
                let p = a.dim();
                if p + k > self.magma.max_dim {
                    break;
                }
                for w in normal_words(p, p + k, true) {
                    out.push(Term::Deg { word: w, x: Arc::new(a.clone()) });
                }
            }
            if self.magma.reversors {
                for j in 1..=a.dim() {
                    out.push(Term::Rev { dir: j, x: Arc::new(a.clone()) });
                }
            }
        }
        out
    }
}

/// Bounds for generation.
#[derive(Clone, Debug, Serialize)]
pub struct Bounds {
    pub levels: usize,
    pub max_dim: usize,
    pub max_term_size: usize,
}

/// Built-in shapes.
pub fn shape(name: &str) -> Option<CubicalSet> {
    match name {
        "chain3" => Some(chain(3)),
        "chain2" => Some(chain(2)),
        "edge" => Some(chain(1)),
        "point" => Some(chain(0)),
        "square" => Some(crate::cubical::standard_cube(2)),
        _ => None,
    }
}

/// Vertices `x0..xk` and edges `a,b,c,...` with `ai: x(i-1) -> xi`.
pub fn chain(k: usize) -> CubicalSet {
    let mut b = CubicalSetBuilder::new(1);
    for i in 0..=k {
        b.add_cell(0, &format!("x{i}")).unwrap();
    }
    for i in 0..k {
        let name = ((b'a' + i as u8) as char).to_string();
        let e = b.add_cell(1, &name).unwrap();
        b.set_face(e, 1, Sign::Minus, CellId::new(0, i)).unwrap();
        b.set_face(e, 1, Sign::Plus, CellId::new(0, i + 1)).unwrap();
    }
    b.build().unwrap()
}

pub struct Generated {
    pub theory: CubicalTheory,
    pub levels: Vec<Level<Term, LiftKind>>,
}

pub fn generate(base: &CubicalSet, reversors: bool, bounds: &Bounds) -> Result<Generated, String> {
    let magma = Magma { base: base.clone(), reversors, max_dim: bounds.max_dim, max_size: bounds.max_term_size };
    let level0 = magma.enumerate();
    let theory = CubicalTheory { magma };
    let levels = generate_levels(&theory, level0, bounds.levels, bounds.max_dim, Induction::Literal)?;
    Ok(Generated { theory, levels })
}

impl Generated {
    pub fn verify(&self) -> Vec<String> {
        verify_levels(&self.theory, &self.levels)
    }

    pub fn dump(&self, name: &str, bounds: &Bounds) -> TheoryDump {
        let m = &self.theory.magma;
        let r = |t: &Term| t.render(&m.base);
        TheoryDump {
            theory: name.to_string(),
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
                            .map(|p| PairRecord {
                                f: r(&p.f),
                                g: r(&p.g),
                                kinds: p.kinds.iter().map(|k| k.to_string()).collect(),
                            })
                            .collect(),
                        lifts: l
                            .lifts
                            .iter()
                            .filter_map(|t| match t {
                                Term::Lift(c) => Some(LiftDump {
                                    kind: c.kind.to_string(),
                                    dim: t.dim(),
                                    f: r(&c.f),
                                    g: r(&c.g),
                                    faces: (1..=t.dim())
                                        .flat_map(|i| Sign::BOTH.map(|s| (i, s)))
                                        .map(|(i, s)| {
                                            let tag = if s == Sign::Minus { "s" } else { "t" };
                                            (format!("{tag}{i}"), r(&m.face(t, i, s)))
                                        })
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

#[derive(Clone, Debug, Serialize)]
pub struct TheoryDump {
    pub theory: String,
    pub bounds: Bounds,
    pub levels: Vec<LevelDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelDump {
    pub level: usize,
    pub arrow_counts: BTreeMap<usize, usize>,
    pub new_arrows: Vec<ArrowDump>,
    pub new_pairs: Vec<PairRecord>,
    pub lifts: Vec<LiftDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ArrowDump {
    pub dim: usize,
    pub body: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct LiftDump {
    pub kind: String,
    pub dim: usize,
    pub f: String,
    pub g: String,
    pub faces: BTreeMap<String, String>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn magma() -> Magma {
        Magma { base: chain(3), reversors: false, max_dim: 2, max_size: 3 }
    }

    #[test]
    fn associator_terms_distinct() {
        let m = magma();
        let g = |i| Term::Gen(CellId::new(1, i));
        let ab = m.compose(1, &g(0), &g(1)).unwrap();
        let bc = m.compose(1, &g(1), &g(2)).unwrap();
        let l = m.compose(1, &ab, &g(2)).unwrap();
        let r = m.compose(1, &g(0), &bc).unwrap();
        assert_ne!(l, r);
        let all = m.enumerate();
        assert!(all.contains(&l) && all.contains(&r));
        let lift = m.lift(LiftKind::Plain(1), &l, &r).unwrap();
        assert!(m.lift_violations(&lift).is_empty());
    }

    #[test]
    fn size_one_is_generators() {
        let m = Magma { base: chain(3), reversors: false, max_dim: 2, max_size: 1 };
        assert_eq!(m.enumerate().len(), 7);
    }
}
