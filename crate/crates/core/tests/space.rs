use proptest::prelude::*;

use filtk::catalog::*;
use filtk::space::{FiniteSpace, Subset, SpaceWitness};
use filtk::Error;

/// Random poset on `n` points from a random set of pairs `(i, j)`, `i > j`,
/// read as `i -> j` before closing transitively.
fn poset_strategy(max: usize) -> impl Strategy<Value = FiniteSpace> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for i in 0..n {
                for j in 0..i {
                    if bits[k] {
                        pairs.push((i, j));
                    }
                    k += 1;
                }
            }
            let names = (1..=n).map(|i| format!("p{i}")).collect();
            FiniteSpace::from_indices(names, &pairs).unwrap()
        })
    })
}

/// Number of cover paths from `y` down to `x`, by recursion over covers.
fn count_paths(s: &FiniteSpace, y: usize, x: usize) -> u64 {
    if y == x {
        return 1;
    }
    s.covers().iter().filter(|&&(a, _)| a == y).map(|&(_, b)| count_paths(s, b, x)).sum()
}

fn oracle_unique_path(s: &FiniteSpace) -> bool {
    (0..s.len()).all(|y| (0..s.len()).all(|x| count_paths(s, y, x) <= 1))
}

/// Convex subsets: exactly the locally closed ones.
fn oracle_lc_count(s: &FiniteSpace) -> usize {
    s.all()
        .subsets()
        .filter(|y| {
            y.iter().all(|a| {
                y.iter().all(|b| (0..s.len()).all(|z| !(s.leq(a, z) && s.leq(z, b)) || y.contains(z)))
            })
        })
        .count()
}

fn is_forest_oracle(s: &FiniteSpace) -> bool {
    // union-find over the Hasse diagram
    let mut parent: Vec<usize> = (0..s.len()).collect();
    fn find(p: &mut Vec<usize>, i: usize) -> usize {
        if p[i] != i {
            let r = find(p, p[i]);
            p[i] = r;
        }
        p[i]
    }
    for &(a, b) in s.covers() {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

#[test]
fn diamond_has_two_paths() {
    let d = diamond();
    let c = d.classify();
    assert!(!c.unique_path);
    match &c.witnesses[0] {
        SpaceWitness::TwoPaths { from, to, first, second } => {
            assert_eq!((from.as_str(), to.as_str()), ("4", "1"));
            assert_ne!(first, second);
        }
        w => panic!("unexpected witness {w:?}"),
    }
}

#[test]
fn q_is_unique_path_but_not_ebp() {
    let q = q_space();
    let c = q.classify();
    assert_eq!(q.len(), 16);
    assert!(c.unique_path);
    assert!(!c.ebp);
    assert!(c.witnesses.iter().any(|w| matches!(w, SpaceWitness::NonPointPair { .. })));
    let names = |p: char| q.parse_names(&(1..=8).map(|i| format!("{p}{i}")).collect::<Vec<_>>().join(",")).unwrap();
    let (u, cl) = (names('x'), names('y'));
    assert!(q.is_open(u) && q.is_closed(cl));
    assert!(q.is_connected(u) && q.is_connected(cl));
    assert!(u.is_subset(q.open_hull(cl)) && cl.is_subset(q.closure(u)));
    assert!(q.elementary_boundary_pairs().contains(&(u, cl)));
    assert!(!q.is_point_pair(u, cl));
}

#[test]
fn pseudocircle_classification() {
    let c = pseudocircle().classify();
    assert!(c.unique_path);
    // computed, see the decisions ledger
    assert!(c.ebp);
    assert!(!c.forest && !c.accordion);
}

#[test]
fn chains_and_zigzags_are_accordions() {
    for n in 1..=6 {
        let c = chain(n).classify();
        assert!(c.accordion && c.forest && c.ebp && c.unique_path, "chain {n}");
        assert_eq!(chain(n).open_sets().len(), n + 1);
    }
    assert!(zigzag4().is_accordion());
    assert!(!forest5().is_accordion());
    assert!(forest5().is_forest());
}

#[test]
fn sierpinski_point_two_is_open() {
    let s = sierpinski();
    let two = s.index_of("2").unwrap();
    let one = s.index_of("1").unwrap();
    assert!(s.is_open(Subset::singleton(two)));
    assert!(s.is_closed(Subset::singleton(one)));
    // the empty set is locally closed
    assert_eq!(s.enumerate_lc().len(), 4);
}

#[test]
fn rejects_bad_input() {
    assert!(matches!(FiniteSpace::new(&["a", "b"], &[("a", "b"), ("b", "a")]), Err(Error::CycleDetected(_))));
    assert!(matches!(FiniteSpace::new(&["a", "a"], &[]), Err(Error::DuplicatePoint(_))));
    assert!(matches!(FiniteSpace::new(&["a"], &[("a", "z")]), Err(Error::UnknownPoint(_))));
    assert!(matches!(FiniteSpace::new(&["a b"], &[]), Err(Error::InvalidPointName(_))));
    assert!(FiniteSpace::from_json("{\"points\": [\"a\"], \"covers\": [[\"a\"]]}").is_err());
}

#[test]
fn transitive_pairs_are_dropped() {
    let s = FiniteSpace::new(&["1", "2", "3"], &[("3", "2"), ("2", "1"), ("3", "1")]).unwrap();
    assert_eq!(s.covers().len(), 2);
    assert_eq!(s, chain(3));
}

#[test]
fn json_round_trip() {
    for s in [diamond(), q_space(), forest5()] {
        assert_eq!(FiniteSpace::from_json(&s.to_json()).unwrap(), s);
    }
}

#[test]
fn locally_closed_sets_are_not_locally_closed_outside() {
    let s = chain(3);
    let ends = Subset::singleton(0).with(2);
    assert!(!s.is_locally_closed(ends));
    assert!(matches!(s.locally_closed(ends), Err(Error::NotLocallyClosed(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn six_conditions_agree_with_path_counting(s in poset_strategy(6)) {
        let expect = oracle_unique_path(&s);
        for (k, c) in s.unique_path_conditions().iter().enumerate() {
            prop_assert_eq!(*c, expect, "condition {} on {}", k + 1, s.to_json());
        }
    }

    #[test]
    fn lc_enumeration_matches_convexity(s in poset_strategy(6)) {
        prop_assert_eq!(s.enumerate_lc().len(), oracle_lc_count(&s));
        for lc in s.enumerate_lc() {
            prop_assert_eq!(lc.set, lc.open_hull.minus(lc.open_boundary));
            prop_assert!(s.is_open(lc.open_hull) && s.is_open(lc.open_boundary));
        }
    }

    #[test]
    fn forests_are_ebp(s in poset_strategy(6)) {
        prop_assert_eq!(s.is_forest(), is_forest_oracle(&s));
        let c = s.classify();
        if c.forest {
            prop_assert!(c.unique_path && c.ebp);
        }
        if c.accordion {
            prop_assert!(c.forest);
        }
    }

    #[test]
    fn classification_ignores_labels(s in poset_strategy(5), seed in any::<u64>()) {
        let n = s.len();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut x = seed;
        for i in (1..n).rev() {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (x >> 33) as usize % (i + 1));
        }
        let t = s.permuted(&perm).unwrap();
        let (a, b) = (s.classify(), t.classify());
        prop_assert_eq!((a.unique_path, a.ebp, a.accordion, a.forest), (b.unique_path, b.ebp, b.accordion, b.forest));
        prop_assert_eq!(s.enumerate_lc().len(), t.enumerate_lc().len());
    }

    #[test]
    fn hulls_and_closures(s in poset_strategy(6), mask in any::<u64>()) {
        let y = Subset(mask & s.all().0);
        let h = s.open_hull(y);
        let c = s.closure(y);
        prop_assert!(s.is_open(h) && y.is_subset(h));
        prop_assert!(s.is_closed(c) && y.is_subset(c));
        prop_assert_eq!(s.open_boundary(y), h.minus(y));
    }
}
