//! Independent oracles against the library's closed forms and enumerators.

use std::collections::{BTreeMap, BTreeSet};

use cubipaste::boxes::DegenerateCell;
use cubipaste::cubical::Sign;
use cubipaste::globular::{globular_sum, trees, GlobularTree};
use cubipaste::pastings::{composition_closure, Terminal};
use cubipaste::strict::terminal_cells;
use cubipaste::words::{normal_words, Letter, Word};

/// Every word from dimension `p` to `n`, without any rewriting.
fn raw_words(p: usize, n: usize, connections: bool) -> Vec<Word> {
    let mut layer = vec![Word::empty(p)];
    for d in p..n {
        layer = layer.iter().flat_map(|w| Letter::all_on(d, connections).into_iter().map(move |l| w.then(l))).collect();
    }
    layer
}

#[test]
fn normal_words_are_the_distinct_lattice_maps() {
    for connections in [false, true] {
        for n in 0..=4 {
            for p in 0..=n {
                let raw = raw_words(p, n, connections);
                let maps: BTreeSet<_> = raw.iter().map(|w| w.map()).collect();
                let normal = normal_words(p, n, connections);
                let normal_maps: BTreeSet<_> = normal.iter().map(|w| w.map()).collect();
                assert_eq!(normal.len(), maps.len(), "p={p} n={n} connections={connections}");
                assert_eq!(normal_maps, maps, "p={p} n={n}");
                // rewriting lands on a normal word with the same map
                for w in &raw {
                    let v = w.normalize();
                    assert!(v.is_normal() && v.map() == w.map(), "{} -> {}", w.text(), v.text());
                }
            }
        }
    }
}

/// Cells of the disks of the top row, each tagged by its disk.
type Node = (usize, usize, Option<Sign>);

fn disk_nodes(l: usize, n: usize) -> Vec<Node> {
    let mut v: Vec<Node> = (0..n).flat_map(|d| [(l, d, Some(Sign::Minus)), (l, d, Some(Sign::Plus))]).collect();
    v.push((l, n, None));
    v
}

/// Colimit classes by propagating the least label along glued pairs until
/// nothing changes.
fn colimit_classes(t: &GlobularTree) -> BTreeMap<Node, usize> {
    let nodes: Vec<Node> = t.top.iter().enumerate().flat_map(|(l, &n)| disk_nodes(l, n)).collect();
    let mut label: BTreeMap<Node, usize> = nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut glued = Vec::new();
    for (l, &b) in t.bottom.iter().enumerate() {
        for d in 0..=b {
            let sides: Vec<Option<Sign>> = if d < b { vec![Some(Sign::Minus), Some(Sign::Plus)] } else { vec![None] };
            for s in sides {
                // the bottom disk sits in the target of disk l and the source of disk l+1
                let left = (l, d, s.or(Some(Sign::Plus)));
                let right = (l + 1, d, s.or(Some(Sign::Minus)));
                glued.push((left, right));
            }
        }
    }
    loop {
        let mut changed = false;
        for (a, b) in &glued {
            let m = label[a].min(label[b]);
            for x in [a, b] {
                if label[x] != m {
                    label.insert(*x, m);
                    changed = true;
                }
            }
        }
        if !changed {
            return label;
        }
    }
}

#[test]
fn globular_sums_match_the_colimit_oracle() {
    let all = trees(4, 3);
    assert!(all.len() > 100);
    for t in &all {
        let sum = globular_sum(t).unwrap();
        let classes = colimit_classes(t);
        let oracle_counts: Vec<usize> = (0..=t.dim())
            .map(|d| classes.iter().filter(|(n, _)| n.1 == d).map(|(_, c)| c).collect::<BTreeSet<_>>().len())
            .collect();
        assert_eq!(sum.set.counts(), oracle_counts, "{t}");
        assert_eq!(t.closed_form_counts(), oracle_counts, "{t}");
        // the sum identifies exactly the cells the oracle identifies
        let image = |&(l, d, s): &Node| {
            let top = sum.disk_tops[l];
            match s {
                None => top,
                Some(Sign::Minus) => sum.set.s_to(top, d),
                Some(Sign::Plus) => sum.set.t_to(top, d),
            }
        };
        for (a, ca) in &classes {
            for (b, cb) in &classes {
                assert_eq!(ca == cb, image(a) == image(b), "{t}: {a:?} {b:?}");
            }
        }
    }
}

#[test]
fn cells_over_the_point_are_the_composition_closure() {
    for connections in [false, true] {
        for (n, size) in [(1, 4), (2, 4), (3, 3)] {
            let cells: Vec<DegenerateCell> = (0..=n)
                .flat_map(|p| normal_words(p, n, connections))
                .map(|w| DegenerateCell::new(&w).unwrap())
                .collect();
            let closure: BTreeSet<_> = composition_closure(&Terminal, &cells, n, size).into_iter().collect();
            let enumerated: BTreeSet<_> =
                terminal_cells(n, size, connections).into_iter().map(|x| x.normalized()).collect();
            assert_eq!(closure, enumerated, "n={n} size={size} connections={connections}");
        }
    }
}
