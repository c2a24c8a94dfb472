//! Structural checks for rectangular divisors: associativity and interchange
//! over every decomposition, faces of composites, the cubical identities on
//! pasting faces, faces of degeneracies, and agreement of the closed-form
//! degeneracies with the split-and-compose transport laws.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rayon::prelude::*;

use crate::boxes::DegenerateCell;
use crate::cubical::{FaceSelector, Sign};
use crate::pastings::{Divisor, Pasting, Terminal};
use crate::strict::{terminal_cells, Failure};
use crate::words::{normal_words, Letter, LetterKind, Word};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub checked: usize,
    pub failures: Vec<Failure>,
}

impl Tally {
    fn expect(&mut self, ok: bool, check: &str, x: &Divisor) {
        self.checked += 1;
        if !ok {
            self.failures.push(Failure { check: check.to_string(), witness: x.render(&Terminal) });
        }
    }

    pub fn merge(mut self, other: Tally) -> Tally {
        self.checked += other.checked;
        self.failures.extend(other.failures);
        self
    }
}

fn same(a: &Result<Divisor, impl std::fmt::Debug>, b: &Divisor) -> bool {
    matches!(a, Ok(p) if p.equivalent(b))
}

/// Faces selected by a selector, highest direction first.
pub fn select(x: &Divisor, sel: &FaceSelector) -> Divisor {
    let mut cur = x.clone();
    for (&d, &s) in sel.assign.iter().rev() {
        cur = cur.pasting_face(&Terminal, d, s).expect("direction in range").into_normalized();
    }
    cur
}

/// Degenerates by the letters of a word, innermost first.
pub fn apply_word(x: &Divisor, w: &Word) -> Option<Divisor> {
    let mut cur = x.clone();
    for l in &w.letters {
        cur = cur.degenerate(&Terminal, *l).ok()?.into_normalized();
    }
    Some(cur)
}

thread_local! {
    static LETTER_FACES: std::cell::RefCell<rustc_hash::FxHashMap<(usize, Letter, usize, Sign), (Word, FaceSelector)>> =
        std::cell::RefCell::new(Default::default());
}

fn letter_face(n: usize, l: Letter, k: usize, s: Sign) -> (Word, FaceSelector) {
    LETTER_FACES.with(|c| {
        c.borrow_mut()
            .entry((n, l, k, s))
            .or_insert_with(|| Word { source: n, letters: vec![l] }.face(k, s))
            .clone()
    })
}

/// How deep the transport laws are unfolded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Depth {
    /// Split all the way down to single terms, in each starting direction.
    Recursive,
    /// One split at every cut, against the closed forms of the two pieces.
    /// Enough when the checked set contains every slice of its members.
    OneLevel,
}

/// Degeneracy of `x` rebuilt from the closed-form degeneracies of its two
/// pieces when cut in direction `d` after depth `cut`.
pub fn transport_once(x: &Divisor, l: Letter, d: usize, cut: i64) -> Result<Divisor, crate::pastings::PasteError> {
    let len = x.extents()[d - 1] as i64;
    let a = x.slice(d, 1, cut);
    let b = x.slice(d, cut + 1, len);
    let i = l.index;
    let dg = |p: &Divisor, l: Letter| p.degenerate(&Terminal, l).map(Divisor::into_normalized);
    match (l.kind, d == i) {
        (LetterKind::Connection(Sign::Plus), true) => {
            let top = dg(&a, l)?.compose(&Terminal, &dg(&a, Letter::deg(i))?, i)?;
            let bottom = dg(&a, Letter::deg(i + 1))?.compose(&Terminal, &dg(&b, l)?, i)?;
            top.compose(&Terminal, &bottom, i + 1)
        }
        (LetterKind::Connection(Sign::Minus), true) => {
            let top = dg(&a, l)?.compose(&Terminal, &dg(&b, Letter::deg(i + 1))?, i)?;
            let bottom = dg(&b, Letter::deg(i))?.compose(&Terminal, &dg(&b, l)?, i)?;
            top.compose(&Terminal, &bottom, i + 1)
        }
        _ => {
            let d2 = if d < i { d } else { d + 1 };
            dg(&a, l)?.compose(&Terminal, &dg(&b, l)?, d2)
        }
    }
}

/// Every check on one divisor.
pub fn check_divisor(x: &Divisor, connections: bool, depth: Depth) -> Tally {
    let mut t = Tally::default();
    let x = x.normalized();
    let n = x.arity;
    let ext = x.extents();
    t.expect(x.validate(&Terminal).is_ok() && !x.is_empty() && n > 0, "well-formed", &x);
    if x.is_empty() || n == 0 {
        return t;
    }
    let faces: Vec<[Divisor; 2]> = (1..=n)
        .map(|i| Sign::BOTH.map(|s| x.pasting_face(&Terminal, i, s).expect("nonempty divisor")))
        .collect();
    let face = |i: usize, s: Sign| &faces[i - 1][(s == Sign::Plus) as usize];
    // faces of faces
    for j in 2..=n {
        for i in 1..j {
            for a in Sign::BOTH {
                for b in Sign::BOTH {
                    let l = face(j, b).pasting_face(&Terminal, i, a);
                    let r = face(i, a).pasting_face(&Terminal, j - 1, b);
                    let ok = matches!((&l, &r), (Ok(l), Ok(r)) if l.equivalent(r));
                    t.expect(ok, "faces of faces", &x);
                }
            }
        }
    }
    // unit laws up to unit collapse
    let core = x.collapse_units(&Terminal);
    for j in 1..=n {
        for s in Sign::BOTH {
            let unit = face(j, s).degenerate(&Terminal, Letter::deg(j));
            let composite = unit.and_then(|u| match s {
                Sign::Minus => u.compose(&Terminal, &x, j),
                Sign::Plus => x.compose(&Terminal, &u, j),
            });
            let ok = matches!(&composite, Ok(c) if c.collapse_units(&Terminal) == core);
            t.expect(ok, "unit law", &x);
        }
    }
    // every split into two and three slices
    for j in 1..=n {
        let len = ext[j - 1] as i64;
        for cut in 1..len {
            let a = x.slice(j, 1, cut);
            let b = x.slice(j, cut + 1, len);
            t.expect(same(&a.compose(&Terminal, &b, j), &x), "composite of a split", &x);
            // faces of the composite
            for i in 1..=n {
                for s in Sign::BOTH {
                    let whole = face(i, s);
                    let expect = if i == j {
                        match s {
                            Sign::Minus => a.pasting_face(&Terminal, i, s),
                            Sign::Plus => b.pasting_face(&Terminal, i, s),
                        }
                    } else {
                        let jj = if i < j { j - 1 } else { j };
                        let fa = a.pasting_face(&Terminal, i, s).unwrap();
                        let fb = b.pasting_face(&Terminal, i, s).unwrap();
                        fa.compose(&Terminal, &fb, jj)
                    };
                    t.expect(same(&expect, whole), "faces of a composite", &x);
                }
            }
            for cut2 in cut + 1..len {
                let b1 = x.slice(j, cut + 1, cut2);
                let c = x.slice(j, cut2 + 1, len);
                let l = a.compose(&Terminal, &b1, j).and_then(|ab| ab.compose(&Terminal, &c, j));
                let r = b1.compose(&Terminal, &c, j).and_then(|bc| a.compose(&Terminal, &bc, j));
                let ok = matches!((&l, &r), (Ok(l), Ok(r)) if l.equivalent(r) && l.equivalent(&x));
                t.expect(ok, "associativity", &x);
            }
        }
    }
    // interchange on quadrants
    for i in 1..=n {
        for j in i + 1..=n {
            for ci in 1..ext[i - 1] as i64 {
                for cj in 1..ext[j - 1] as i64 {
                    let (li, lj) = (ext[i - 1] as i64, ext[j - 1] as i64);
                    let q = |ri: (i64, i64), rj: (i64, i64)| x.slice(i, ri.0, ri.1).slice(j, rj.0, rj.1);
                    let (a, b) = (q((1, ci), (1, cj)), q((ci + 1, li), (1, cj)));
                    let (c, d) = (q((1, ci), (cj + 1, lj)), q((ci + 1, li), (cj + 1, lj)));
                    let rows = a
                        .compose(&Terminal, &b, i)
                        .and_then(|ab| c.compose(&Terminal, &d, i).and_then(|cd| ab.compose(&Terminal, &cd, j)));
                    let cols = a
                        .compose(&Terminal, &c, j)
                        .and_then(|ac| b.compose(&Terminal, &d, j).and_then(|bd| ac.compose(&Terminal, &bd, i)));
                    let ok = matches!((&rows, &cols), (Ok(r), Ok(c)) if r.equivalent(c) && r.equivalent(&x));
                    t.expect(ok, "interchange", &x);
                }
            }
        }
    }
    // degeneracies; the face oracle repeats across letters, so it is memoized
    let mut expected: BTreeMap<(FaceSelector, Word), Option<Divisor>> = BTreeMap::new();
    let orders: Vec<Vec<usize>> = (1..=n).map(|d| vec![d]).collect();
    for l in Letter::all_on(n, connections) {
        let Ok(closed) = x.degenerate(&Terminal, l) else {
            t.expect(false, "degeneracy defined", &x);
            continue;
        };
        let closed = closed.into_normalized();
        t.expect(closed.validate(&Terminal).is_ok(), "degeneracy well-formed", &x);
        match depth {
            Depth::Recursive => {
                for o in &orders {
                    let split = x.degenerate_by_splitting(&Terminal, l, o);
                    t.expect(same(&split, &closed), "transport law", &x);
                }
            }
            Depth::OneLevel => {
                for d in 1..=n {
                    let len = ext[d - 1] as i64;
                    // a connection split along its own direction only
                    // typechecks when one piece is a single slice
                    let cuts: Vec<i64> = match l.kind {
                        LetterKind::Connection(Sign::Plus) if d == l.index => vec![len - 1],
                        LetterKind::Connection(Sign::Minus) if d == l.index => vec![1],
                        _ => (1..len).collect(),
                    };
                    for cut in cuts.into_iter().filter(|&c| c >= 1 && c < len) {
                        let ok = matches!(transport_once(&x, l, d, cut), Ok(p) if p.equivalent(&closed));
                        t.expect(ok, "transport law", &x);
                    }
                }
            }
        }
        for k in 1..=n + 1 {
            for s in Sign::BOTH {
                let (w2, sel) = letter_face(n, l, k, s);
                let expect = expected
                    .entry((sel, w2))
                    .or_insert_with_key(|(sel, w2)| apply_word(&select(&x, sel), w2))
                    .as_ref();
                let got = closed.pasting_face(&Terminal, k, s).ok();
                let ok = match (expect, got) {
                    (Some(e), Some(g)) => {
                        let g = g.into_normalized();
                        *e == g || e.collapse_units(&Terminal) == g.collapse_units(&Terminal)
                    }
                    _ => false,
                };
                t.expect(ok, "faces of a degeneracy", &x);
            }
        }
    }
    t
}

/// Every rectangular divisor up to arity `n_max` with at most `size` terms.
pub fn exhaustive(n_max: usize, size: usize, connections: bool) -> Tally {
    (1..=n_max)
        .flat_map(|n| terminal_cells(n, size, connections))
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| check_divisor(x, connections, Depth::OneLevel))
        .reduce(Tally::default, Tally::merge)
}

/// A random rectangular divisor with the given extents, or `None` when the
/// sampled cells leave no compatible choice.
pub fn random_divisor(rng: &mut ChaCha8Rng, extents: &[usize], connections: bool) -> Option<Divisor> {
    let n = extents.len();
    let cells: Vec<DegenerateCell> =
        (0..=n).flat_map(|p| normal_words(p, n, connections)).map(|w| DegenerateCell::new(&w).unwrap()).collect();
    let grid = crate::coords::Configuration::grid(extents);
    let mut terms = std::collections::BTreeMap::new();
    for c in &grid.coords {
        let ok: Vec<&DegenerateCell> = cells
            .iter()
            .filter(|cell| {
                (1..=n).all(|j| {
                    let mut prev = c.clone();
                    prev.0[j - 1] -= 1;
                    terms.get(&prev).is_none_or(|p: &DegenerateCell| p.face(j, Sign::Plus) == cell.face(j, Sign::Minus))
                })
            })
            .collect();
        if ok.is_empty() {
            return None;
        }
        terms.insert(c.clone(), ok[rng.gen_range(0..ok.len())].clone());
    }
    Some(Pasting { arity: n, terms })
}

/// `count` random divisors of arity at most `n_max` and at most `max_terms`
/// terms, reproducible from `seed`.
pub fn random_instances(seed: u64, count: usize, n_max: usize, max_terms: usize, connections: bool) -> Vec<Divisor> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=n_max);
        let mut ext = vec![1usize; n];
        let mut total = 1;
        loop {
            let d = rng.gen_range(0..n);
            if total / ext[d] * (ext[d] + 1) > max_terms || rng.gen_bool(0.25) {
                break;
            }
            total = total / ext[d] * (ext[d] + 1);
            ext[d] += 1;
        }
        if let Some(x) = random_divisor(&mut rng, &ext, connections) {
            out.push(x);
        }
    }
    out
}

pub fn random(seed: u64, count: usize, n_max: usize, max_terms: usize, connections: bool) -> Tally {
    random_instances(seed, count, n_max, max_terms, connections)
        .par_iter()
        .map(|x| check_divisor(x, connections, Depth::Recursive))
        .reduce(Tally::default, Tally::merge)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_exhaustive() {
        let t = exhaustive(2, 3, true);
        assert!(t.failures.is_empty(), "{:?}", &t.failures[..t.failures.len().min(3)]);
        assert!(t.checked > 0);
    }

    #[test]
    fn random_is_seeded() {
        assert_eq!(random_instances(3, 5, 3, 8, true), random_instances(3, 5, 3, 8, true));
    }
}
