//! Words in degeneracies and connections, with a semantic normal form.
//!
//! A word from dimension `p` to dimension `n` acts on `p`-cells and is
//! interpreted as a cube map `I^n -> I^p`. Each output coordinate is a
//! read-once lattice term in the input coordinates; the lower connection
//! is `max`, the upper one is `min`. Two words are equal iff their maps are.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cubical::{FaceSelector, Sign};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum LetterKind {
    Degeneracy,
    Connection(Sign),
}

/// One generating operation. `index` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub kind: LetterKind,
    pub index: usize,
}

impl Letter {
    pub fn deg(index: usize) -> Self {
        Letter { kind: LetterKind::Degeneracy, index }
    }

    pub fn conn(sign: Sign, index: usize) -> Self {
        Letter { kind: LetterKind::Connection(sign), index }
    }

    pub fn is_connection(&self) -> bool {
        matches!(self.kind, LetterKind::Connection(_))
    }

    /// Whether the letter can act on cells of dimension `d`.
    pub fn valid_on(&self, d: usize) -> bool {
        match self.kind {
            LetterKind::Degeneracy => self.index >= 1 && self.index <= d + 1,
            LetterKind::Connection(_) => self.index >= 1 && self.index <= d,
        }
    }

    /// All letters acting on dimension `d`.
    pub fn all_on(d: usize, connections: bool) -> Vec<Letter> {
        let mut v: Vec<Letter> = (1..=d + 1).map(Letter::deg).collect();
        if connections {
            for s in Sign::BOTH {
                v.extend((1..=d).map(|i| Letter::conn(s, i)));
            }
        }
        v
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LetterKind::Degeneracy => write!(f, "e{}", self.index),
            LetterKind::Connection(s) => write!(f, "g{}{}", s, self.index),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WordError {
    #[error("cannot parse letter `{0}`")]
    BadLetter(String),
    #[error("letter {letter} does not act on dimension {dim}")]
    OutOfRange { letter: String, dim: usize },
    #[error("word from dimension {source_dim} has length {len} but target {target} was requested")]
    DepthMismatch { source_dim: usize, len: usize, target: usize },
}

impl FromStr for Letter {
    type Err = WordError;
    fn from_str(s: &str) -> Result<Self, WordError> {
        let t = s.trim();
        let bad = || WordError::BadLetter(s.to_string());
        if let Some(rest) = t.strip_prefix('e') {
            return rest.parse().map(Letter::deg).map_err(|_| bad());
        }
        if let Some(rest) = t.strip_prefix('g') {
            let mut ch = rest.chars();
            let sign = ch.next().and_then(Sign::parse).ok_or_else(bad)?;
            return ch.as_str().parse().map(|i| Letter::conn(sign, i)).map_err(|_| bad());
        }
        Err(bad())
    }
}

/// A word, letters stored in application order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word {
    pub source: usize,
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn empty(source: usize) -> Self {
        Word { source, letters: Vec::new() }
    }

    pub fn target(&self) -> usize {
        self.source + self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn has_connections(&self) -> bool {
        self.letters.iter().any(|l| l.is_connection())
    }

    pub fn validate(&self) -> Result<(), WordError> {
        let mut d = self.source;
        for l in &self.letters {
            if !l.valid_on(d) {
                return Err(WordError::OutOfRange { letter: l.to_string(), dim: d });
            }
            d += 1;
        }
        Ok(())
    }

    /// Raw word extended by one outer letter.
    pub fn then(&self, l: Letter) -> Word {
        let mut w = self.clone();
        w.letters.push(l);
        w
    }

    /// `self` applied after `inner`.
    pub fn after(&self, inner: &Word) -> Word {
        assert_eq!(inner.target(), self.source);
        let mut letters = inner.letters.clone();
        letters.extend_from_slice(&self.letters);
        Word { source: inner.source, letters }
    }

    /// Parses the outermost-first text form, e.g. `e3.g+2.e1`, for a word
    /// reaching dimension `target`.
    pub fn parse(text: &str, target: usize) -> Result<Word, WordError> {
        let t = text.trim();
        let mut letters: Vec<Letter> = if t.is_empty() || t == "id" {
            Vec::new()
        } else {
            t.split('.').map(|s| s.trim().parse()).collect::<Result<_, _>>()?
        };
        letters.reverse();
        if letters.len() > target {
            return Err(WordError::DepthMismatch { source_dim: 0, len: letters.len(), target });
        }
        let w = Word { source: target - letters.len(), letters };
        w.validate()?;
        Ok(w)
    }

    pub fn text(&self) -> String {
        self.letters.iter().rev().map(|l| l.to_string()).collect::<Vec<_>>().join(".")
    }

    pub fn map(&self) -> CubeMap {
        let mut m = CubeMap::identity(self.source);
        for l in &self.letters {
            m = m.apply(*l);
        }
        m
    }

    pub fn normalize(&self) -> Word {
        self.map().canonical_word().expect("maps of words have no constants")
    }

    pub fn is_normal(&self) -> bool {
        self.normalize() == *self
    }

    /// Face `(dir, sign)` of `word(core)`: returns the normalized word acting
    /// on a face of the core, and the selector picking that face.
    pub fn face(&self, dir: usize, sign: Sign) -> (Word, FaceSelector) {
        let m = self.map().face(dir, sign);
        m.split_constants()
    }

    /// Applies a canonical selector in descending direction order.
    pub fn select(&self, sel: &FaceSelector) -> (Word, FaceSelector) {
        assert_eq!(sel.ambient, self.target());
        let mut m = self.map();
        for (&d, &s) in sel.assign.iter().rev() {
            m = m.face(d, s);
        }
        m.split_constants()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            write!(f, "id")
        } else {
            write!(f, "{}", self.text())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Lattice {
    Max,
    Min,
}

impl Lattice {
    fn of(sign: Sign) -> Lattice {
        match sign {
            Sign::Minus => Lattice::Max,
            Sign::Plus => Lattice::Min,
        }
    }

    fn sign(self) -> Sign {
        match self {
            Lattice::Max => Sign::Minus,
            Lattice::Min => Sign::Plus,
        }
    }

    /// The constant absorbed by this operation.
    fn absorbing(self) -> Sign {
        match self {
            Lattice::Max => Sign::Plus,
            Lattice::Min => Sign::Minus,
        }
    }
}

/// Read-once lattice term; variables are 0-based input coordinates.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(usize),
    Op(Lattice, Vec<Term>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Const(Sign),
    Term(Term),
}

impl Term {
    fn vars(&self, out: &mut Vec<usize>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::Op(_, ch) => ch.iter().for_each(|c| c.vars(out)),
        }
    }

    fn min_var(&self) -> usize {
        match self {
            Term::Var(v) => *v,
            Term::Op(_, ch) => ch.iter().map(Term::min_var).min().unwrap(),
        }
    }

    fn substitute(&self, f: &dyn Fn(usize) -> Output) -> Output {
        match self {
            Term::Var(v) => f(*v),
            Term::Op(op, ch) => {
                let mut kids = Vec::new();
                for c in ch {
                    match c.substitute(f) {
                        Output::Const(s) if s == op.absorbing() => return Output::Const(s),
                        Output::Const(_) => {}
                        Output::Term(t) => kids.push(t),
                    }
                }
                build_op(*op, kids)
            }
        }
    }

    fn rename(&self, f: &dyn Fn(usize) -> usize) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(*v)),
            Term::Op(op, ch) => Term::Op(*op, ch.iter().map(|c| c.rename(f)).collect()),
        }
    }

    pub fn render(&self) -> String {
        match self {
            Term::Var(v) => format!("t{}", v + 1),
            Term::Op(op, ch) => {
                let name = match op {
                    Lattice::Max => "max",
                    Lattice::Min => "min",
                };
                let inner: Vec<String> = ch.iter().map(Term::render).collect();
                format!("{}({})", name, inner.join(","))
            }
        }
    }
}

fn build_op(op: Lattice, kids: Vec<Term>) -> Output {
    let mut flat = Vec::new();
    for k in kids {
        match k {
            Term::Op(o, ch) if o == op => flat.extend(ch),
            other => flat.push(other),
        }
    }
    flat.sort_by_key(Term::min_var);
    match flat.len() {
        0 => Output::Const(op.absorbing().flip()),
        1 => Output::Term(flat.pop().unwrap()),
        _ => Output::Term(Term::Op(op, flat)),
    }
}

/// A monotone cube map `I^inputs -> I^outputs.len()`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubeMap {
    pub inputs: usize,
    pub outputs: Vec<Output>,
}

impl CubeMap {
    pub fn identity(p: usize) -> Self {
        CubeMap { inputs: p, outputs: (0..p).map(|v| Output::Term(Term::Var(v))).collect() }
    }

    fn precompose(&self, inputs: usize, f: &dyn Fn(usize) -> Output) -> CubeMap {
        let outputs = self
            .outputs
            .iter()
            .map(|o| match o {
                Output::Const(s) => Output::Const(*s),
                Output::Term(t) => t.substitute(f),
            })
            .collect();
        CubeMap { inputs, outputs }
    }

    /// Map of `letter(word)` given the map of `word`.
    pub fn apply(&self, l: Letter) -> CubeMap {
        assert!(l.valid_on(self.inputs), "letter {l} invalid on dimension {}", self.inputs);
        let j = l.index - 1;
        match l.kind {
            LetterKind::Degeneracy => self.precompose(self.inputs + 1, &|v| {
                Output::Term(Term::Var(if v < j { v } else { v + 1 }))
            }),
            LetterKind::Connection(s) => self.precompose(self.inputs + 1, &|v| {
                if v < j {
                    Output::Term(Term::Var(v))
                } else if v == j {
                    build_op(Lattice::of(s), vec![Term::Var(j), Term::Var(j + 1)])
                } else {
                    Output::Term(Term::Var(v + 1))
                }
            }),
        }
    }

    /// Map of the face `(dir, sign)`.
    pub fn face(&self, dir: usize, sign: Sign) -> CubeMap {
        assert!(dir >= 1 && dir <= self.inputs);
        let i = dir - 1;
        self.precompose(self.inputs - 1, &|v| {
            if v < i {
                Output::Term(Term::Var(v))
            } else if v == i {
                Output::Const(sign)
            } else {
                Output::Term(Term::Var(v - 1))
            }
        })
    }

    /// Splits constant outputs off as a selector on the target cube.
    pub fn split_constants(&self) -> (Word, FaceSelector) {
        let mut sel = FaceSelector::identity(self.outputs.len());
        let mut rest = Vec::new();
        for (k, o) in self.outputs.iter().enumerate() {
            match o {
                Output::Const(s) => {
                    sel.assign.insert(k + 1, *s);
                }
                Output::Term(t) => rest.push(Output::Term(t.clone())),
            }
        }
        let m = CubeMap { inputs: self.inputs, outputs: rest };
        (m.canonical_word().expect("constants removed"), sel)
    }

    pub fn has_constants(&self) -> bool {
        self.outputs.iter().any(|o| matches!(o, Output::Const(_)))
    }

    /// The canonical word realizing this map: connections innermost with
    /// left-first binary splits, then degeneracies at increasing positions.
    pub fn canonical_word(&self) -> Option<Word> {
        let mut terms = Vec::with_capacity(self.outputs.len());
        for o in &self.outputs {
            match o {
                Output::Term(t) => terms.push(t.clone()),
                Output::Const(_) => return None,
            }
        }
        let mut used = Vec::new();
        terms.iter().for_each(|t| t.vars(&mut used));
        let mut sorted = used.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), used.len(), "terms are read-once and disjoint");
        let rank = |v: usize| sorted.binary_search(&v).unwrap();
        let mut slots: Vec<Term> = terms.iter().map(|t| t.rename(&rank)).collect();
        let p = slots.len();
        let mut letters = Vec::new();
        loop {
            let Some(s) = slots.iter().position(|t| matches!(t, Term::Op(..))) else { break };
            let Term::Op(op, ch) = slots[s].clone() else { unreachable!() };
            let left = ch[0].clone();
            let right = if ch.len() == 2 { ch[1].clone() } else { Term::Op(op, ch[1..].to_vec()) };
            letters.push(Letter::conn(op.sign(), s + 1));
            slots[s] = left;
            slots.insert(s + 1, right);
        }
        for (k, t) in slots.iter().enumerate() {
            assert_eq!(*t, Term::Var(k), "ordered variable blocks");
        }
        for u in 0..self.inputs {
            if sorted.binary_search(&u).is_err() {
                letters.push(Letter::deg(u + 1));
            }
        }
        Some(Word { source: p, letters })
    }

    pub fn render(&self) -> String {
        let v: Vec<String> = self
            .outputs
            .iter()
            .map(|o| match o {
                Output::Const(s) => s.to_string(),
                Output::Term(t) => t.render(),
            })
            .collect();
        format!("({})", v.join(", "))
    }
}

/// Face pushing by the symbolic face relations, independent of the
/// semantic model. Returns the (unnormalized) word and the residual core face.
pub fn push_face_symbolic(w: &Word, dir: usize, sign: Sign) -> (Word, Option<(usize, Sign)>) {
    let mut cur = Some((dir, sign));
    let mut out_outer_first = Vec::new();
    for l in w.letters.iter().rev() {
        let Some((i, a)) = cur else {
            out_outer_first.push(*l);
            continue;
        };
        let j = l.index;
        match l.kind {
            LetterKind::Degeneracy => {
                if i < j {
                    out_outer_first.push(Letter::deg(j - 1));
                } else if i == j {
                    cur = None;
                } else {
                    out_outer_first.push(Letter::deg(j));
                    cur = Some((i - 1, a));
                }
            }
            LetterKind::Connection(g) => {
                if i < j {
                    out_outer_first.push(Letter::conn(g, j - 1));
                } else if i > j + 1 {
                    out_outer_first.push(Letter::conn(g, j));
                    cur = Some((i - 1, a));
                } else if a == g {
                    cur = None;
                } else {
                    out_outer_first.push(Letter::deg(j));
                    cur = Some((j, a));
                }
            }
        }
    }
    out_outer_first.reverse();
    let source = match cur {
        Some(_) => w.source - 1,
        None => w.source,
    };
    (Word { source, letters: out_outer_first }, cur)
}

/// All normal words from dimension `p` to dimension `n`, sorted.
pub fn normal_words(p: usize, n: usize, connections: bool) -> Vec<Word> {
    use std::collections::BTreeSet;
    if n < p {
        return Vec::new();
    }
    let mut layer: BTreeSet<Word> = BTreeSet::new();
    layer.insert(Word::empty(p));
    for d in p..n {
        let mut next = BTreeSet::new();
        for w in &layer {
            for l in Letter::all_on(d, connections) {
                next.insert(w.then(l).normalize());
            }
        }
        layer = next;
    }
    layer.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_square() {
        let w = Word { source: 0, letters: vec![Letter::deg(1), Letter::deg(1)] };
        assert_eq!(w.normalize().text(), "e2.e1");
    }

    #[test]
    fn lower_connection_faces() {
        let w = Word { source: 1, letters: vec![Letter::conn(Sign::Minus, 1)] };
        let (f, sel) = w.face(1, Sign::Minus);
        assert!(f.is_empty() && sel.assign.is_empty());
        let (f, sel) = w.face(1, Sign::Plus);
        assert_eq!(f.text(), "e1");
        assert_eq!(sel.pattern(), "+");
    }

    #[test]
    fn parse_round_trip() {
        let w = Word::parse("e3.g+2.e1", 4).unwrap();
        assert_eq!(w.source, 1);
        assert_eq!(w.text(), "e3.g+2.e1");
    }

    #[test]
    fn word_counts_to_dim3() {
        assert_eq!(normal_words(2, 3, true).len(), 7);
        assert_eq!(normal_words(1, 3, true).len(), 15);
        assert_eq!(normal_words(1, 3, false).len(), 3);
    }
}
