//! Admissible pairs and level-by-level adjunction of lifts, shared by the
//! cubical and globular coherators.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{Debug, Display};
use std::hash::Hash;

use rayon::prelude::*;
use serde::Serialize;

pub trait LiftingTheory: Sync {
    type Term: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync;
    type Kind: Clone + Eq + Hash + Ord + Debug + Display + Send + Sync;

    fn dim(&self, t: &Self::Term) -> usize;
    /// Arrows coming from the base shape with no magma operation applied.
    fn is_bare(&self, t: &Self::Term) -> bool;
    /// Terms with different keys can never form a liftable pair.
    fn parallel_key(&self, t: &Self::Term) -> Vec<Self::Term>;
    /// Lift kinds available for the pair; empty when none.
    fn kinds(&self, f: &Self::Term, g: &Self::Term) -> Vec<Self::Kind>;
    fn lift(&self, kind: &Self::Kind, f: &Self::Term, g: &Self::Term) -> Result<Self::Term, String>;
    /// Violated boundary equations of a lift, as messages.
    fn verify_lift(&self, t: &Self::Term) -> Vec<String>;
    /// New terms built from freshly added lifts by the unary operations,
    /// within the theory's bounds.
    fn close(&self, atoms: &[Self::Term]) -> Vec<Self::Term>;
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AdmissiblePair<T, K> {
    pub f: T,
    pub g: T,
    pub kinds: Vec<K>,
}

impl<T: Display, K: Display> AdmissiblePair<T, K> {
    pub fn record(&self) -> PairRecord {
        PairRecord {
            f: self.f.to_string(),
            g: self.g.to_string(),
            kinds: self.kinds.iter().map(|k| k.to_string()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub f: String,
    pub g: String,
    pub kinds: Vec<String>,
}

/// How the new pairs of a level are chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Induction {
    /// Admissible pairs of the level not in the previous new-pair set.
    Literal,
    /// Admissible pairs of the level not admissible at the previous level.
    Cumulative,
}

#[derive(Clone, Debug)]
pub struct Level<T, K> {
    pub index: usize,
    /// Terms first available at this level.
    pub new_terms: Vec<T>,
    /// Every term available at this level.
    pub all_terms: BTreeSet<T>,
    pub admissible: Vec<AdmissiblePair<T, K>>,
    pub new_pairs: Vec<AdmissiblePair<T, K>>,
    /// Lifts of `new_pairs`, adjoined at the next level.
    pub lifts: Vec<T>,
}

/// All admissible pairs among `terms` of dimension below `max_dim`.
pub fn admissible_pairs<L: LiftingTheory>(
    theory: &L,
    terms: &BTreeSet<L::Term>,
    max_dim: usize,
) -> Vec<AdmissiblePair<L::Term, L::Kind>> {
    let mut groups: BTreeMap<(usize, Vec<L::Term>), Vec<&L::Term>> = BTreeMap::new();
    for t in terms {
        let d = theory.dim(t);
        if d < max_dim {
            groups.entry((d, theory.parallel_key(t))).or_default().push(t);
        }
    }
    let groups: Vec<Vec<&L::Term>> = groups.into_values().filter(|g| g.len() > 1).collect();
    let mut out: Vec<AdmissiblePair<L::Term, L::Kind>> = groups
        .par_iter()
        .flat_map_iter(|g| {
            let mut v = Vec::new();
            for f in g {
                for h in g {
                    if f == h || (theory.is_bare(f) && theory.is_bare(h)) {
                        continue;
                    }
                    let kinds = theory.kinds(f, h);
                    if !kinds.is_empty() {
                        v.push(AdmissiblePair { f: (*f).clone(), g: (*h).clone(), kinds });
                    }
                }
            }
            v
        })
        .collect();
    out.sort();
    out
}

fn pair_keys<T: Clone + Ord, K>(v: &[AdmissiblePair<T, K>]) -> BTreeSet<(T, T)> {
    v.iter().map(|p| (p.f.clone(), p.g.clone())).collect()
}

/// Builds levels `0..=m_max` starting from the level-0 terms.
pub fn generate_levels<L: LiftingTheory>(
    theory: &L,
    level0: Vec<L::Term>,
    m_max: usize,
    max_dim: usize,
    induction: Induction,
) -> Result<Vec<Level<L::Term, L::Kind>>, String> {
    let mut levels: Vec<Level<L::Term, L::Kind>> = Vec::new();
    let mut all: BTreeSet<L::Term> = BTreeSet::new();
    for m in 0..=m_max {
        let mut new_terms = Vec::new();
        if m == 0 {
            for t in level0.iter() {
                if all.insert(t.clone()) {
                    new_terms.push(t.clone());
                }
            }
        } else {
            let prev = &levels[m - 1];
            let mut atoms = Vec::new();
            for t in &prev.lifts {
                if all.insert(t.clone()) {
                    atoms.push(t.clone());
                    new_terms.push(t.clone());
                }
            }
            for t in theory.close(&atoms) {
                if all.insert(t.clone()) {
                    new_terms.push(t.clone());
                }
            }
        }
        let admissible = admissible_pairs(theory, &all, max_dim);
        let exclude = match (induction, levels.last()) {
            (_, None) => BTreeSet::new(),
            (Induction::Literal, Some(p)) => pair_keys(&p.new_pairs),
            (Induction::Cumulative, Some(p)) => pair_keys(&p.admissible),
        };
        let new_pairs: Vec<_> =
            admissible.iter().filter(|p| !exclude.contains(&(p.f.clone(), p.g.clone()))).cloned().collect();
        let mut lifts = Vec::new();
        for p in &new_pairs {
            for k in &p.kinds {
                lifts.push(theory.lift(k, &p.f, &p.g)?);
            }
        }
        lifts.sort();
        lifts.dedup();
        levels.push(Level { index: m, new_terms, all_terms: all.clone(), admissible, new_pairs, lifts });
    }
    Ok(levels)
}

/// Boundary violations over every lift of every level.
pub fn verify_levels<L: LiftingTheory>(theory: &L, levels: &[Level<L::Term, L::Kind>]) -> Vec<String> {
    levels
        .iter()
        .flat_map(|l| l.lifts.par_iter().flat_map_iter(|t| theory.verify_lift(t)).collect::<Vec<_>>())
        .collect()
}
