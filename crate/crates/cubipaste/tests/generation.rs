//! Bounded coherator generation, cubical and globular.

use cubipaste::coherator::{self, Bounds};
use cubipaste::globular::{self, GlobularTree};
use cubipaste::lifting::Induction;

const SMOKE: Bounds = Bounds { levels: 1, max_dim: 2, max_term_size: 5 };

#[test]
fn pair_counts_agree_between_cubical_and_globular_generation() {
    // over the 3-chain both theories see the same 1-dimensional arrows,
    // so their level-0 admissible pairs coincide
    let w = coherator::generate(&coherator::chain(3), false, &SMOKE).unwrap();
    let w0 = coherator::generate(&coherator::chain(3), true, &SMOKE).unwrap();
    assert_eq!(w.levels[0].admissible.len(), 770);
    assert_eq!(w0.levels[0].admissible.len(), 11148);
    let tree = GlobularTree::chain(3);
    let count = |m| globular::generate(&tree, m, &SMOKE, Induction::Literal).unwrap().levels[0].admissible.len();
    assert_eq!(count(2), 770);
    assert_eq!(count(1), 11148);
    assert_eq!(count(0), 11148);
}

#[test]
fn cubical_levels_verify_and_close() {
    for reversors in [false, true] {
        let g = coherator::generate(&coherator::chain(3), reversors, &SMOKE).unwrap();
        assert!(g.verify().is_empty(), "{:?}", &g.verify()[..1]);
        // every lift is a term of the next level
        assert!(g.levels[0].lifts.iter().all(|t| g.levels[1].all_terms.contains(t)));
        assert!(!g.levels[1].new_terms.is_empty());
    }
    let two = Bounds { levels: 2, ..SMOKE };
    let g = coherator::generate(&coherator::chain(3), false, &two).unwrap();
    // lifts of 1-dimensional pairs are 2-dimensional, at the bound
    assert!(g.levels[2].new_terms.is_empty());
    assert!(g.verify().is_empty());
}

#[test]
fn inductions_agree_over_two_levels() {
    let tree = GlobularTree::chain(3);
    for (m, b) in [
        (2, Bounds { levels: 2, max_dim: 2, max_term_size: 5 }),
        (1, Bounds { levels: 2, max_dim: 2, max_term_size: 4 }),
        (0, Bounds { levels: 2, max_dim: 3, max_term_size: 4 }),
    ] {
        let lit = globular::generate(&tree, m, &b, Induction::Literal).unwrap();
        let cum = globular::generate(&tree, m, &b, Induction::Cumulative).unwrap();
        assert_eq!(lit.levels.len(), cum.levels.len());
        for (a, c) in lit.levels.iter().zip(&cum.levels) {
            assert_eq!(a.all_terms, c.all_terms, "m={m} level {}", a.index);
        }
        assert!(lit.verify().is_empty(), "m={m}");
    }
}

#[test]
fn filtration_inclusions_hold() {
    let tree = GlobularTree::chain(3);
    for m in 0..2 {
        assert!(globular::filtration_holds(&tree, m, &Bounds { levels: 2, max_dim: 2, max_term_size: 4 }).unwrap());
    }
}

#[test]
fn generation_is_reproducible() {
    let a = coherator::generate(&coherator::chain(3), true, &SMOKE).unwrap();
    let b = coherator::generate(&coherator::chain(3), true, &SMOKE).unwrap();
    let dump = |g: &coherator::Generated| serde_json::to_string(&g.dump("W0", &SMOKE)).unwrap();
    assert_eq!(dump(&a), dump(&b));
}
