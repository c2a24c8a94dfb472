//! Batch verification suites and their machine-readable reports.
//!
//! Every suite is deterministic for a given seed and bounds. Instances run
//! in parallel; results are collected in instance order, so the serialized
//! report does not depend on scheduling. Wall time is only recorded when
//! asked for.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::axioms;
use crate::boxes::{links_congruent, Link};
use crate::coherator::{self, Bounds, LiftKind, Term};
use crate::coords::{Configuration, Coordinate};
use crate::cubical::{normalize_zigzag, standard_cube, CellId, CubicalSet, Sign};
use crate::globular::{self, GTerm, GlobularTree};
use crate::lifting::Induction;
use crate::pastings::{Divisor, Pasting, Terminal};
use crate::reflexive::{
    all_morphisms, apply_reflexive, check_pullback, extend_dim, map_reflexive, multiplication, pullback,
    small_family, terminal_set, to_terminal, CubicalMap, RCell, Reflexive,
};
use crate::sketches::realize;
use crate::strict;
use crate::words::Word;

pub const SUITES: [&str; 9] = [
    "cubical",
    "congruence",
    "axioms-cpast",
    "monad-R",
    "monad-S",
    "monad-S-noconn",
    "realization",
    "coherator-smoke",
    "globular",
];

/// Witnesses kept per check; the failure count is always exact.
const MAX_WITNESSES: usize = 20;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unknown suite `{0}`; known suites: {list}", list = SUITES.join(", "))]
    UnknownSuite(String),
    #[error("unknown bound `{key}` for suite {suite}; known bounds: {known}")]
    UnknownBound { suite: String, key: String, known: String },
    #[error("{0}")]
    Setup(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub instance: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub instances: usize,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub suite: String,
    pub seed: u64,
    pub bounds: BTreeMap<String, usize>,
    pub passed: bool,
    pub checks: Vec<CheckResult>,
    /// Counts reported without being asserted.
    pub observations: BTreeMap<String, usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Accumulates checks of one suite.
#[derive(Default)]
struct Sheet {
    checks: BTreeMap<String, CheckResult>,
    order: Vec<String>,
    observations: BTreeMap<String, usize>,
}

impl Sheet {
    fn entry(&mut self, name: &str) -> &mut CheckResult {
        if !self.checks.contains_key(name) {
            self.order.push(name.to_string());
            self.checks.insert(
                name.to_string(),
                CheckResult { name: name.to_string(), instances: 0, failures: 0, witnesses: Vec::new() },
            );
        }
        self.checks.get_mut(name).unwrap()
    }

    fn check(&mut self, name: &str, ok: bool, instance: impl FnOnce() -> String, detail: impl FnOnce() -> String) {
        let e = self.entry(name);
        e.instances += 1;
        if !ok {
            e.failures += 1;
            if e.witnesses.len() < MAX_WITNESSES {
                e.witnesses.push(Witness { instance: instance(), detail: detail() });
            }
        }
    }

    fn absorb(&mut self, other: Sheet) {
        for name in other.order {
            let c = &other.checks[&name];
            let e = self.entry(&name);
            e.instances += c.instances;
            e.failures += c.failures;
            for w in &c.witnesses {
                if e.witnesses.len() < MAX_WITNESSES {
                    e.witnesses.push(w.clone());
                }
            }
        }
        for (k, v) in other.observations {
            *self.observations.entry(k).or_default() += v;
        }
    }

    fn observe(&mut self, key: &str, v: usize) {
        *self.observations.entry(key.to_string()).or_default() += v;
    }
}

/// Default bounds of a suite; these are the acceptance bounds.
pub fn default_bounds(suite: &str) -> Result<BTreeMap<String, usize>, RunError> {
    let pairs: &[(&str, usize)] = match suite {
        "cubical" => &[("max_dim", 4), ("max_len", 4)],
        "congruence" => &[("max_dim", 4)],
        "axioms-cpast" => &[("max_arity", 3), ("max_terms", 6), ("random", 1000), ("random_terms", 12)],
        "monad-R" => &[("max_cells", 3), ("max_dim", 2), ("up_to", 3)],
        "monad-S" | "monad-S-noconn" => &[("max_cells", 3), ("max_dim", 2), ("size", 3)],
        "realization" => &[("max_arity", 2), ("max_terms", 4), ("max_cells", 3), ("grid", 3)],
        "coherator-smoke" => &[("levels", 1), ("max_dim", 2), ("max_term_size", 5)],
        "globular" => &[("max_k", 4), ("max_entry", 3), ("levels", 1), ("max_dim", 2), ("max_term_size", 5)],
        _ => return Err(RunError::UnknownSuite(suite.to_string())),
    };
    Ok(pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

/// Runs a suite with the given overrides of its default bounds.
pub fn run_suite(
    name: &str,
    overrides: &BTreeMap<String, usize>,
    seed: u64,
    timing: bool,
) -> Result<RunReport, RunError> {
    let mut bounds = default_bounds(name)?;
    for (k, v) in overrides {
        if !bounds.contains_key(k) {
            let known = bounds.keys().cloned().collect::<Vec<_>>().join(", ");
            return Err(RunError::UnknownBound { suite: name.to_string(), key: k.clone(), known });
        }
        bounds.insert(k.clone(), *v);
    }
    let b = |k: &str| bounds[k];
    let start = Instant::now();
    let sheet = match name {
        "cubical" => cubical_suite(b("max_dim"), b("max_len")),
        "congruence" => congruence_suite(b("max_dim")),
        "axioms-cpast" => axioms_suite(b("max_arity"), b("max_terms"), b("random"), b("random_terms"), seed),
        "monad-R" => monad_r_suite(b("max_cells"), b("max_dim"), b("up_to")),
        "monad-S" => monad_s_suite(b("max_cells"), b("max_dim"), b("size"), true),
        "monad-S-noconn" => monad_s_suite(b("max_cells"), b("max_dim"), b("size"), false),
        "realization" => realization_suite(b("max_arity"), b("max_terms"), b("max_cells"), b("grid")),
        "coherator-smoke" => coherator_suite(&Bounds {
            levels: b("levels"),
            max_dim: b("max_dim"),
            max_term_size: b("max_term_size"),
        })?,
        "globular" => globular_suite(
            b("max_k"),
            b("max_entry"),
            &Bounds { levels: b("levels"), max_dim: b("max_dim"), max_term_size: b("max_term_size") },
        )?,
        _ => unreachable!("bounds lookup rejects unknown suites"),
    };
    let wall_ms = timing.then(|| start.elapsed().as_millis());
    let checks: Vec<CheckResult> = sheet.order.iter().map(|k| sheet.checks[k].clone()).collect();
    Ok(RunReport {
        suite: name.to_string(),
        seed,
        bounds,
        passed: checks.iter().all(|c| c.passed()),
        checks,
        observations: sheet.observations,
        wall_ms,
    })
}

/// Runs every suite in order.
pub fn run_all(seed: u64, timing: bool) -> Result<Vec<RunReport>, RunError> {
    SUITES.iter().map(|s| run_suite(s, &BTreeMap::new(), seed, timing)).collect()
}

/// Caps the global thread pool at `CUBIPASTE_THREADS` when set.
pub fn configure_threads() -> Result<Option<usize>, String> {
    let Ok(v) = std::env::var("CUBIPASTE_THREADS") else { return Ok(None) };
    let n: usize = v.trim().parse().map_err(|_| format!("CUBIPASTE_THREADS must be a positive integer, got `{v}`"))?;
    if n == 0 {
        return Err("CUBIPASTE_THREADS must be at least 1".into());
    }
    // a second call finds the pool already built, which is fine
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(Some(n))
}

// zigzags

/// Sequences of face steps of length `len` on an `n`-cube; step `k` picks a
/// direction among the `n - k` remaining ones.
pub fn zigzags(n: usize, len: usize) -> Vec<Vec<(usize, Sign)>> {
    let mut out = vec![Vec::new()];
    for k in 0..len.min(n) {
        let mut next = Vec::new();
        for z in &out {
            for d in 1..=n - k {
                for s in Sign::BOTH {
                    let mut v: Vec<(usize, Sign)> = z.clone();
                    v.push((d, s));
                    next.push(v);
                }
            }
        }
        out = next;
    }
    if len > n {
        return Vec::new();
    }
    out
}

/// The composite of the coface maps of a zigzag as a table on vertices:
/// entry `v` is the image of vertex `v` of the residual cube, written as
/// bits of the ambient cube.
pub fn zigzag_vertex_map(n: usize, steps: &[(usize, Sign)]) -> Vec<Vec<u8>> {
    let m = n - steps.len();
    (0..1usize << m)
        .map(|v| {
            let mut bits: Vec<u8> = (0..m).map(|i| ((v >> i) & 1) as u8).collect();
            // the last step applied is the innermost coface
            for &(d, s) in steps.iter().rev() {
                bits.insert(d - 1, (s == Sign::Plus) as u8);
            }
            bits
        })
        .collect()
}

fn render_steps(steps: &[(usize, Sign)]) -> String {
    let parts: Vec<String> =
        steps.iter().map(|(d, s)| format!("{}{d}", if *s == Sign::Minus { 's' } else { 't' })).collect();
    if parts.is_empty() {
        "id".into()
    } else {
        parts.join(" ")
    }
}

fn cubical_suite(max_dim: usize, max_len: usize) -> Sheet {
    let mut sh = Sheet::default();
    for n in 0..=max_dim {
        let cube = standard_cube(n);
        let v = cube.check_identities();
        sh.check("cube identities", v.is_empty(), || format!("n={n}"), || format!("{v:?}"));
        let top = CellId::new(n, 0);
        for len in 0..=max_len.min(n) {
            // normal form -> (vertex map, cell) must be a well-defined injection
            let mut by_sel: BTreeMap<String, (Vec<Vec<u8>>, CellId)> = BTreeMap::new();
            let mut by_map: BTreeMap<Vec<Vec<u8>>, String> = BTreeMap::new();
            for z in zigzags(n, len) {
                let sel = normalize_zigzag(n, &z).expect("steps in range");
                let pattern = sel.pattern();
                let vmap = zigzag_vertex_map(n, &z);
                let cell = z.iter().fold(top, |c, &(d, s)| cube.face(c, d, s));
                let inst = || format!("n={n} steps={}", render_steps(&z));
                sh.check(
                    "normal form evaluates to the composite",
                    cube.apply_selector(top, &sel) == cell,
                    inst,
                    || pattern.clone(),
                );
                let same_sel = match by_sel.get(&pattern) {
                    Some((m, c)) => *m == vmap && *c == cell,
                    None => true,
                };
                sh.check("equal normal forms give equal composites", same_sel, inst, || pattern.clone());
                let same_map = match by_map.get(&vmap) {
                    Some(p) => *p == pattern,
                    None => true,
                };
                sh.check("equal composites give equal normal forms", same_map, inst, || pattern.clone());
                by_sel.entry(pattern.clone()).or_insert((vmap.clone(), cell));
                by_map.entry(vmap).or_insert(pattern);
            }
        }
    }
    sh
}

fn congruence_suite(max_dim: usize) -> Sheet {
    let mut sh = Sheet::default();
    for n in 1..=max_dim {
        let base = Coordinate::from((1..=n as i64).map(|k| k + 1).collect::<Vec<_>>());
        let links: Vec<Link> =
            (1..=n).flat_map(|len| zigzags(n, len)).map(|steps| Link::new(base.clone(), steps)).collect();
        let terms: Vec<_> = links.iter().map(|l| l.terminal().expect("steps in range")).collect();
        let mut sign_mismatch = 0;
        for (i, a) in links.iter().enumerate() {
            for (k, b) in links.iter().enumerate().skip(i + 1) {
                if !links_congruent(a, b) {
                    continue;
                }
                let (ta, tb) = (&terms[i], &terms[k]);
                sh.check(
                    "congruent links share the terminal coordinate",
                    ta.coordinate == tb.coordinate,
                    || format!("n={n} [{}] ~ [{}]", render_steps(&a.steps), render_steps(&b.steps)),
                    || format!("{:?} vs {:?}", ta.coordinate, tb.coordinate),
                );
                if ta.last_sign != tb.last_sign {
                    sign_mismatch += 1;
                }
            }
        }
        sh.observe("congruent pairs with different last signs", sign_mismatch);
    }
    sh
}

fn tally_into(sh: &mut Sheet, t: axioms::Tally, instance: &str) {
    let mut failures: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for f in t.failures {
        failures.entry(f.check).or_default().push(f.witness);
    }
    let e = sh.entry(&format!("{instance}: all laws"));
    e.instances += t.checked;
    for (check, ws) in failures {
        for w in ws {
            sh.check(&format!("{instance}: {check}"), false, || instance.to_string(), || w);
        }
    }
}

fn axioms_suite(n_max: usize, size: usize, random: usize, random_terms: usize, seed: u64) -> Sheet {
    let mut sh = Sheet::default();
    tally_into(&mut sh, axioms::exhaustive(n_max, size, true), "enumerated");
    tally_into(&mut sh, axioms::random(seed, random, n_max, random_terms, true), "random");
    sh
}

fn family_label(k: usize, c: &CubicalSet) -> String {
    format!("family[{k}] counts={:?}", c.counts())
}

fn map_eq(a: &CubicalMap, b: &CubicalMap) -> bool {
    a.maps == b.maps
}

fn identity_on(r: &Reflexive) -> CubicalMap {
    CubicalMap::identity(&r.set)
}

fn monad_r_instance(k: usize, c: &CubicalSet, up_to: usize, one: &Reflexive, rr_one: &Reflexive) -> Sheet {
    let mut sh = Sheet::default();
    let label = family_label(k, c);
    let c = extend_dim(c, up_to);
    let r = apply_reflexive(&c, up_to, true);
    let rr = apply_reflexive(&r.set, up_to, true);
    let rrr = apply_reflexive(&rr.set, up_to, true);
    let inst = || label.clone();
    let v = r.set.check_identities();
    sh.check("extension satisfies the identities", v.is_empty(), inst, || format!("{v:?}"));
    let i = r.unit();
    let m = multiplication(&rr, &r);
    sh.check("unit is natural", i.naturality_failure(&c, &r.set).is_none(), inst, || "face mismatch".into());
    sh.check("multiplication is natural", m.naturality_failure(&rr.set, &r.set).is_none(), inst, || {
        "face mismatch".into()
    });
    // m . i_R = id and m . R(i) = id
    let left = rr.unit().then(&m);
    sh.check("left unit law", map_eq(&left, &identity_on(&r)), inst, || "m . iR".into());
    let ri = map_reflexive(&i, &r, &rr);
    sh.check("right unit law", map_eq(&ri.then(&m), &identity_on(&r)), inst, || "m . Ri".into());
    // m . m_R = m . R(m)
    let m_r = multiplication(&rrr, &rr);
    let r_m = map_reflexive(&m, &rrr, &rr);
    sh.check("associativity", map_eq(&m_r.then(&m), &r_m.then(&m)), inst, || "m . mR vs m . Rm".into());
    // naturality squares over the map to the terminal set are pullbacks
    let bang = to_terminal(&c, up_to);
    let r_bang = map_reflexive(&bang, &r, one);
    let fail = check_pullback(
        (&c.counts(), &r.set.counts(), &terminal_set(up_to).counts()),
        &i,
        &bang,
        &r_bang,
        &one.unit(),
        up_to,
    );
    sh.check("unit square is a pullback", fail.is_none(), inst, || format!("{fail:?}"));
    let rr_bang = map_reflexive(&r_bang, &rr, rr_one);
    let m_one = multiplication(rr_one, one);
    let fail = check_pullback(
        (&rr.set.counts(), &r.set.counts(), &rr_one.set.counts()),
        &m,
        &rr_bang,
        &r_bang,
        &m_one,
        up_to,
    );
    sh.check("multiplication square is a pullback", fail.is_none(), inst, || format!("{fail:?}"));
    sh
}

fn monad_r_suite(max_cells: usize, max_dim: usize, up_to: usize) -> Sheet {
    let fam = small_family(max_cells, max_dim);
    let one = apply_reflexive(&terminal_set(up_to), up_to, true);
    let rr_one = apply_reflexive(&one.set, up_to, true);
    let sheets: Vec<Sheet> =
        fam.par_iter().enumerate().map(|(k, c)| monad_r_instance(k, c, up_to, &one, &rr_one)).collect();
    let mut sh = Sheet::default();
    for s in sheets {
        sh.absorb(s);
    }
    // the extension preserves products over the terminal set
    let pairs: Vec<(usize, usize)> = (0..fam.len()).flat_map(|a| (a..fam.len()).map(move |b| (a, b))).collect();
    let sheets: Vec<Sheet> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut s = Sheet::default();
            let (ca, cb) = (extend_dim(&fam[a], up_to), extend_dim(&fam[b], up_to));
            let (fa, fb) = (to_terminal(&ca, up_to), to_terminal(&cb, up_to));
            let (p, pa, pb) = pullback(&ca, &cb, &fa, &fb);
            let (rp, ra, rb) =
                (apply_reflexive(&p, up_to, true), apply_reflexive(&ca, up_to, true), apply_reflexive(&cb, up_to, true));
            let fail = check_pullback(
                (&rp.set.counts(), &ra.set.counts(), &rb.set.counts()),
                &map_reflexive(&pa, &rp, &ra),
                &map_reflexive(&pb, &rp, &rb),
                &map_reflexive(&fa, &ra, &one),
                &map_reflexive(&fb, &rb, &one),
                up_to,
            );
            s.check(
                "pullbacks are preserved",
                fail.is_none(),
                || format!("{} x {}", family_label(a, &fam[a]), family_label(b, &fam[b])),
                || format!("{fail:?}"),
            );
            s
        })
        .collect();
    for s in sheets {
        sh.absorb(s);
    }
    sh.observe("cubical sets in the family", fam.len());
    sh
}

fn monad_s_suite(max_cells: usize, max_dim: usize, size: usize, connections: bool) -> Sheet {
    let fam = small_family(max_cells, max_dim);
    let sheets: Vec<Sheet> = fam
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            let mut sh = Sheet::default();
            let label = family_label(k, c);
            let c = extend_dim(c, max_dim);
            for n in 0..=max_dim {
                let inst = || format!("{label} n={n}");
                let (checked, fails) = strict::check_monad_laws(&c, n, size, connections);
                let e = sh.entry("monad laws");
                e.instances += checked;
                for f in fails {
                    sh.check("monad laws", false, inst, || format!("{}: {}", f.check, f.witness));
                }
                let (checked, fails) = strict::check_cartesian_squares(&c, n, (size, size.min(2)), connections);
                let e = sh.entry("unit and multiplication squares are pullbacks");
                e.instances += checked;
                for f in fails {
                    sh.check("unit and multiplication squares are pullbacks", false, inst, || {
                        format!("{}: {}", f.check, f.witness)
                    });
                }
            }
            sh
        })
        .collect();
    let mut sh = Sheet::default();
    for s in sheets {
        sh.absorb(s);
    }
    // pullback preservation on cospans into the terminal set
    let one = terminal_set(max_dim);
    for a in 0..fam.len() {
        for b in a..fam.len() {
            let (ca, cb) = (extend_dim(&fam[a], max_dim), extend_dim(&fam[b], max_dim));
            let (fa, fb) = (to_terminal(&ca, max_dim), to_terminal(&cb, max_dim));
            for n in 0..=max_dim {
                let f = strict::check_preserves_pullback(&ca, &cb, &fa, &fb, n, size, connections);
                sh.check(
                    "pullbacks are preserved",
                    f.is_none(),
                    || format!("{} x {} n={n}", family_label(a, &fam[a]), family_label(b, &fam[b])),
                    || format!("{f:?}"),
                );
            }
        }
    }
    // the free construction on the point agrees with the divisor enumerator
    for n in 0..=max_dim {
        let free = strict::free_cells(&one, n, size, connections).len();
        let divs = strict::terminal_cells(n, size, connections).len();
        sh.check(
            "cells over the point match the divisor count",
            free == divs,
            || format!("n={n} size<={size}"),
            || format!("{free} vs {divs}"),
        );
        sh.observe(&format!("cells over the point, n={n}"), free);
    }
    sh
}

/// Cell counts of a grid of identity cubes with the given extents.
pub fn grid_counts(extents: &[usize]) -> Vec<usize> {
    let n = extents.len();
    (0..=n)
        .map(|d| {
            (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == d)
                .map(|m| {
                    extents
                        .iter()
                        .enumerate()
                        .map(|(i, &k)| if m >> i & 1 == 1 { k } else { k + 1 })
                        .product::<usize>()
                })
                .sum()
        })
        .collect()
}

/// The grid of identity cubes with the given extents.
pub fn grid(extents: &[usize]) -> Divisor {
    let n = extents.len();
    let conf = Configuration::grid(extents);
    Pasting {
        arity: n,
        terms: conf.coords.into_iter().map(|c| (c, crate::boxes::DegenerateCell::identity(n))).collect(),
    }
}

fn realization_instance(x: &Divisor, fam: &[CubicalSet]) -> Sheet {
    let mut sh = Sheet::default();
    let inst = || x.render(&Terminal);
    let r = match realize(x) {
        Ok(r) => r,
        Err(e) => {
            sh.check("realization exists", false, inst, || e);
            return sh;
        }
    };
    sh.check("realization exists", true, inst, String::new);
    for (k, c) in fam.iter().enumerate() {
        let c = extend_dim(c, r.set.max_dim());
        let decs: BTreeSet<Pasting<RCell>> =
            strict::decorations_of(&c, x, true).into_iter().map(|p| p.normalized()).collect();
        let homs = all_morphisms(&r.set, &c);
        let mut images = BTreeSet::new();
        let mut ok = true;
        for h in &homs {
            let d = Pasting {
                arity: x.arity,
                terms: x
                    .terms
                    .iter()
                    .map(|(u, a)| (u.clone(), RCell { word: a.word().clone(), core: h.apply(r.cores[u]) }))
                    .collect(),
            }
            .normalized();
            ok &= decs.contains(&d);
            ok &= images.insert(d);
        }
        ok &= images.len() == decs.len();
        sh.check(
            "maps out of the realization are decorations",
            ok,
            || format!("{} into family[{k}]", inst()),
            || format!("{} maps, {} decorations, {} distinct images", homs.len(), decs.len(), images.len()),
        );
    }
    sh
}

fn realization_suite(max_arity: usize, max_terms: usize, max_cells: usize, max_grid: usize) -> Sheet {
    let fam = small_family(max_cells, max_arity);
    let xs: Vec<Divisor> = (0..=max_arity).flat_map(|n| strict::terminal_cells(n, max_terms, true)).collect();
    let sheets: Vec<Sheet> = xs.par_iter().map(|x| realization_instance(x, &fam)).collect();
    let mut sh = Sheet::default();
    for s in sheets {
        sh.absorb(s);
    }
    for n in 1..=3 {
        let mut ext = vec![1usize; n];
        loop {
            let got = realize(&grid(&ext)).map(|r| r.set.counts());
            let want = grid_counts(&ext);
            sh.check(
                "grid realization counts",
                got.as_ref() == Ok(&want),
                || format!("grid {ext:?}"),
                || format!("{got:?} vs {want:?}"),
            );
            let mut i = 0;
            while i < n && ext[i] == max_grid {
                ext[i] = 1;
                i += 1;
            }
            if i == n {
                break;
            }
            ext[i] += 1;
        }
    }
    sh.observe("divisors", xs.len());
    sh
}

/// The two bracketings of `a b c` in direction 1.
pub fn associator_pair(m: &coherator::Magma) -> (Term, Term) {
    let g = |i| Term::Gen(CellId::new(1, i));
    let l = m.compose(1, &m.compose(1, &g(0), &g(1)).unwrap(), &g(2)).unwrap();
    let r = m.compose(1, &g(0), &m.compose(1, &g(1), &g(2)).unwrap()).unwrap();
    (l, r)
}

/// Left and right unit pairs for the first edge.
pub fn unit_pairs(m: &coherator::Magma) -> Vec<(Term, Term)> {
    let a = Term::Gen(CellId::new(1, 0));
    let e = |v: usize| Term::degenerate(&Word::parse("e1", 1).unwrap(), Term::Gen(CellId::new(0, v)));
    vec![(m.compose(1, &e(0), &a).unwrap(), a.clone()), (m.compose(1, &a, &e(1)).unwrap(), a)]
}

/// The inverse pair `(a ; rev a, e1(s a))`.
pub fn inverse_pair(m: &coherator::Magma) -> (Term, Term) {
    let a = Term::Gen(CellId::new(1, 0));
    let rev = Term::Rev { dir: 1, x: std::sync::Arc::new(a.clone()) };
    let e = Term::degenerate(&Word::parse("e1", 1).unwrap(), Term::Gen(CellId::new(0, 0)));
    (m.compose(1, &a, &rev).unwrap(), e)
}

fn has_plain_lift(terms: &[Term], f: &Term, g: &Term) -> bool {
    terms.iter().any(|t| matches!(t, Term::Lift(c) if c.kind == LiftKind::Plain(1) && c.f == *f && c.g == *g))
}

fn coherator_suite(bounds: &Bounds) -> Result<Sheet, RunError> {
    let mut sh = Sheet::default();
    let base = coherator::chain(3);
    for (name, reversors) in [("W", false), ("W0", true)] {
        let g = coherator::generate(&base, reversors, bounds).map_err(RunError::Setup)?;
        let m = &g.theory.magma;
        let v = g.verify();
        let lifts: usize = g.levels.iter().map(|l| l.lifts.len()).sum();
        sh.check(
            "lift boundaries satisfy their equations",
            v.is_empty(),
            || format!("{name} over chain3"),
            || v.iter().take(5).cloned().collect::<Vec<_>>().join("; "),
        );
        sh.observe(&format!("{name}: lifts"), lifts);
        sh.observe(&format!("{name}: level-0 pairs"), g.levels[0].new_pairs.len());
        if g.levels.len() < 2 {
            continue;
        }
        let level1 = &g.levels[1].new_terms;
        let (l, r) = associator_pair(m);
        sh.check("associator lift at level 1", has_plain_lift(level1, &l, &r), || name.to_string(), || {
            format!("no plain1 lift of ({}, {})", l.render(&m.base), r.render(&m.base))
        });
        for (f, u) in unit_pairs(m) {
            sh.check("unit lifts at level 1", has_plain_lift(level1, &f, &u), || name.to_string(), || {
                format!("no plain1 lift of ({}, {})", f.render(&m.base), u.render(&m.base))
            });
        }
        if reversors {
            let (f, e) = inverse_pair(m);
            let found = g.levels[0].new_pairs.iter().any(|p| p.f == f && p.g == e);
            sh.check("inverse pair is admissible", found, || name.to_string(), || {
                format!("({}, {}) not admissible", f.render(&m.base), e.render(&m.base))
            });
            sh.check("inverse pair is lifted", has_plain_lift(level1, &f, &e), || name.to_string(), || {
                format!("({}, {}) not lifted", f.render(&m.base), e.render(&m.base))
            });
        }
    }
    Ok(sh)
}

fn globular_suite(max_k: usize, max_entry: usize, bounds: &Bounds) -> Result<Sheet, RunError> {
    let mut sh = Sheet::default();
    let mut all_trees = Vec::new();
    for k in 1..=max_k {
        for t in globular::trees(k, max_entry) {
            let got = globular::globular_sum(&t).map(|s| s.set.counts());
            let want = t.closed_form_counts();
            sh.check("sum counts", got.as_ref() == Ok(&want), || t.to_string(), || format!("{got:?} vs {want:?}"));
            all_trees.push(t);
        }
    }
    sh.observe("trees", all_trees.len());
    // the sample models satisfy the fiber-product condition on small trees
    let samples = [("poset 2", globular::poset_category(2, 2), 2), ("cyclic 2", globular::cyclic_two_category(2), 0)];
    let small: Vec<GlobularTree> = all_trees.iter().filter(|t| t.top.len() <= 3 && t.dim() <= 2).cloned().collect();
    for (name, cat, m) in &samples {
        let v = cat.violations(*m);
        sh.check("sample model is strict", v.is_empty(), || name.to_string(), || v.join("; "));
        let models: Vec<_> = small.iter().map(|t| globular::hom_model(&cat.set, t)).collect();
        let r = globular::model_check(&cat.set, &models);
        sh.check("fiber-product condition", r.is_ok(), || name.to_string(), || format!("{r:?}"));
    }
    let tree = GlobularTree::chain(3);
    for m in 0..=2 {
        let lit = globular::generate(&tree, m, bounds, Induction::Literal).map_err(RunError::Setup)?;
        let cum = globular::generate(&tree, m, bounds, Induction::Cumulative).map_err(RunError::Setup)?;
        let v = lit.verify();
        sh.check("lift boundaries", v.is_empty(), || format!("m={m}"), || v.join("; "));
        let agree = lit.levels.iter().zip(&cum.levels).all(|(a, b)| a.all_terms == b.all_terms);
        sh.check("both inductions give the same arrows", agree, || format!("m={m}"), String::new);
        if lit.levels.len() > 1 {
            let g = |i| GTerm::Gen(CellId::new(1, i));
            let mg = &lit.magma;
            let (ab, bc) = (mg.compose(0, &g(1), &g(0)), mg.compose(0, &g(2), &g(1)));
            let l = ab.and_then(|ab| mg.compose(0, &g(2), &ab));
            let r = bc.and_then(|bc| mg.compose(0, &bc, &g(0)));
            let found = match (l, r) {
                (Some(l), Some(r)) => lit.levels[1].new_terms.iter().any(|t| {
                    matches!(t, GTerm::Lift(c) if (c.0 == l && c.1 == r) || (c.0 == r && c.1 == l))
                }),
                _ => false,
            };
            sh.check("associator lift at level 1", found, || format!("m={m}"), String::new);
        }
        sh.observe(&format!("m={m}: level-0 pairs"), lit.levels[0].new_pairs.len());
        if m < 2 {
            let f = globular::filtration_holds(&tree, m, bounds).map_err(RunError::Setup)?;
            sh.check("filtration inclusion", f, || format!("m={} into m={m}", m + 1), String::new);
        }
    }
    Ok(sh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_lists_names() {
        let e = run_suite("nope", &BTreeMap::new(), 0, false).unwrap_err().to_string();
        assert!(e.contains("axioms-cpast") && e.contains("globular"));
    }

    #[test]
    fn grid_formula() {
        assert_eq!(grid_counts(&[2, 2]), vec![9, 12, 4]);
        assert_eq!(grid_counts(&[3]), vec![4, 3]);
    }

    #[test]
    fn zigzag_counts() {
        assert_eq!(zigzags(3, 2).len(), 6 * 4);
        assert_eq!(zigzag_vertex_map(2, &[(1, Sign::Plus)]), vec![vec![1, 0], vec![1, 1]]);
    }
}
