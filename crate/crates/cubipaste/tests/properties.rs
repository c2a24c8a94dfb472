//! Randomized invariants.

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubipaste::axioms::{check_divisor, random_divisor, Depth};
use cubipaste::cubical::{normalize_zigzag, selector_steps, Sign};
use cubipaste::globular::{globular_sum, GlobularTree};
use cubipaste::io;
use cubipaste::pastings::Terminal;
use cubipaste::runner::zigzag_vertex_map;
use cubipaste::words::{Letter, Word};

fn sign() -> impl Strategy<Value = Sign> {
    prop_oneof![Just(Sign::Minus), Just(Sign::Plus)]
}

/// A word from dimension `p`, built from letter choices reduced modulo the
/// number of letters available at each step.
fn word() -> impl Strategy<Value = (Word, bool)> {
    (0usize..3, prop::collection::vec(any::<u16>(), 0..4), any::<bool>()).prop_map(|(p, picks, conn)| {
        let mut w = Word::empty(p);
        for (k, pick) in picks.into_iter().enumerate() {
            let ls = Letter::all_on(p + k, conn);
            w = w.then(ls[pick as usize % ls.len()]);
        }
        (w, conn)
    })
}

/// A tree with up to four top entries, each at most three.
fn tree() -> impl Strategy<Value = GlobularTree> {
    (0usize..=3, prop::collection::vec((any::<u8>(), any::<u8>()), 0..4)).prop_map(|(first, rest)| {
        let mut top = vec![first];
        let mut bottom = Vec::new();
        for (b, t) in rest {
            let last = *top.last().unwrap();
            if last == 0 {
                break;
            }
            let b = b as usize % last;
            top.push(b + 1 + t as usize % (3 - b));
            bottom.push(b);
        }
        GlobularTree::new(top, bottom).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_divisors_satisfy_every_check(seed in any::<u64>(), ext in prop::collection::vec(1usize..=3, 1..=3)) {
        prop_assume!(ext.iter().product::<usize>() <= 8);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(x) = random_divisor(&mut rng, &ext, true) {
            let t = check_divisor(&x, true, Depth::Recursive);
            prop_assert!(t.failures.is_empty(), "{:?}", t.failures.first());
            prop_assert!(t.checked > 0);
        }
    }

    #[test]
    fn normalization_is_idempotent_and_keeps_the_map((w, _) in word()) {
        let v = w.normalize();
        prop_assert!(v.is_normal());
        prop_assert_eq!(v.normalize(), v.clone());
        prop_assert_eq!(v.map(), w.map());
        prop_assert_eq!(v.target(), w.target());
    }

    #[test]
    fn faces_commute_with_normalization((w, _) in word(), k in 0usize..8, s in sign()) {
        let n = w.target();
        prop_assume!(n > 0);
        let dir = k % n + 1;
        prop_assert_eq!(w.face(dir, s), w.normalize().face(dir, s));
    }

    #[test]
    fn zigzags_with_equal_normal_forms_have_equal_composites(
        n in 1usize..=4,
        raw in prop::collection::vec((any::<u8>(), sign()), 0..4),
        other in prop::collection::vec((any::<u8>(), sign()), 0..4),
    ) {
        let fit = |v: &[(u8, Sign)]| -> Vec<(usize, Sign)> {
            v.iter().take(n).enumerate().map(|(k, &(d, s))| (d as usize % (n - k) + 1, s)).collect()
        };
        let (a, b) = (fit(&raw), fit(&other));
        prop_assume!(a.len() == b.len());
        let (sa, sb) = (normalize_zigzag(n, &a).unwrap(), normalize_zigzag(n, &b).unwrap());
        prop_assert_eq!(sa == sb, zigzag_vertex_map(n, &a) == zigzag_vertex_map(n, &b));
        // the canonical steps reproduce the selector
        prop_assert_eq!(normalize_zigzag(n, &selector_steps(&sa)).unwrap(), sa);
    }

    #[test]
    fn globular_sum_counts_follow_the_closed_form(t in tree()) {
        let s = globular_sum(&t).unwrap();
        prop_assert_eq!(s.set.counts(), t.closed_form_counts());
        prop_assert!(s.set.check().is_ok());
    }

    #[test]
    fn divisor_files_round_trip(seed in any::<u64>(), ext in prop::collection::vec(1usize..=3, 1..=3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some(x) = random_divisor(&mut rng, &ext, true) {
            let text = io::print_divisor(&x);
            let back = io::parse_divisor(&text).unwrap();
            prop_assert_eq!(&back, &x);
            prop_assert_eq!(io::print_divisor(&back), text);
            prop_assert!(back.validate(&Terminal).is_ok());
        }
    }

    #[test]
    fn tree_files_round_trip(t in tree()) {
        let text = io::print_tree(&t);
        prop_assert_eq!(io::parse_tree(&text).unwrap(), t);
    }
}
