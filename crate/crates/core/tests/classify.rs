use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use filtk::catalog::*;
use filtk::classify::*;
use filtk::corpus::st_corpus;
use filtk::functors::{direct_sum, restrict, twist};
use filtk::invariants::*;
use filtk::selftest::{accordion_spaces, one_point_r};
use filtk::space::Subset;
use filtk::zmodule::{FgGroup, IntMatrix};
use filtk::Error;

fn z(n: usize) -> FgGroup {
    FgGroup::free(n)
}

fn pointed(m: Module) -> PointedModule {
    let n = unit_receptacle(&m).unwrap().sum.gens();
    PointedModule::new(m, vec![BigInt::zero(); n]).unwrap()
}

fn check<'a>(v: &'a Verdict, id: &str) -> &'a Check {
    v.checks.iter().find(|c| c.id == id).unwrap_or_else(|| panic!("no check {id} in {v:?}"))
}

#[test]
fn trivial_k1_is_free() {
    let s = Arc::new(chain(3));
    let r = restrict(&point_module(&s, 0, 0, 0).unwrap(), Kind::R).unwrap();
    let v = range_check_graph(&r).unwrap();
    assert_eq!(v.graph_realizable, Some(true));
    assert_eq!(v.failures().count(), 0);
}

#[test]
fn torsion_k1_fails_with_witness() {
    let s = Arc::new(chain(3));
    let r = restrict(&point_module(&s, 1, 1, 2).unwrap(), Kind::R).unwrap();
    let v = range_check_graph(&r).unwrap();
    assert_eq!(v.graph_realizable, Some(false));
    let c = check(&v, "r.free.2");
    assert!(!c.passed);
    assert!(c.witness.as_deref().unwrap().contains("k1:2 is Z/2"));
    assert!(v.failures().all(|c| c.witness.is_some()));
}

#[test]
fn sierpinski_extension_is_graph_realizable() {
    let r = restrict(&sierpinski_extension(), Kind::R).unwrap();
    assert_eq!(r.group(&Obj::K1(0)).describe(), "Z");
    assert_eq!(range_check_graph(&r).unwrap().graph_realizable, Some(true));
}

#[test]
fn range_checks_need_r_modules() {
    assert!(matches!(range_check_graph(&sierpinski_extension()), Err(Error::InvalidModule(_))));
}

#[test]
fn ck_rank_examples() {
    let v = range_check_ck(&one_point_r(z(1), z(0), z(1)).unwrap()).unwrap();
    assert_eq!((v.graph_realizable, v.ck_realizable), (Some(true), Some(true)));

    let v = range_check_ck(&one_point_r(z(0), z(0), z(1)).unwrap()).unwrap();
    assert_eq!(v.ck_realizable, Some(false));
    assert!(check(&v, "ck.rank.x").witness.is_some());

    let gosi = FgGroup::direct_sum(&[&z(2), &FgGroup::cyclic(3)]);
    let v = range_check_ck(&one_point_r(z(2), z(0), gosi).unwrap()).unwrap();
    assert_eq!(v.ck_realizable, Some(true));
    assert!(check(&v, "r.fg.x").passed);
}

#[test]
fn unital_examples() {
    let v = range_check_unital(&pointed(one_point_r(z(0), z(0), z(1)).unwrap())).unwrap();
    assert_eq!((v.unital_graph_realizable, v.unital_ck_realizable), (Some(true), Some(false)));
    assert!(check(&v, "unital.unit").passed);

    let v = range_check_unital(&pointed(one_point_r(z(1), z(0), z(1)).unwrap())).unwrap();
    assert_eq!((v.unital_graph_realizable, v.unital_ck_realizable), (Some(true), Some(true)));

    let v = range_check_unital(&pointed(one_point_r(z(2), z(0), z(1)).unwrap())).unwrap();
    assert_eq!((v.unital_graph_realizable, v.unital_ck_realizable), (Some(false), Some(false)));
    assert!(!check(&v, "unital.rank.le.x").passed);
    assert!(v.is_monotone());
}

fn one_point_st(k0: usize, k1: usize, k1_torsion: i64) -> Module {
    let op = Arc::new(one_point());
    let mut parts: Vec<Module> = Vec::new();
    parts.extend((0..k0).map(|_| point_module(&op, 0, 0, 0).unwrap()));
    parts.extend((0..k1).map(|_| point_module(&op, 0, 1, 0).unwrap()));
    if k1_torsion > 0 {
        parts.push(point_module(&op, 0, 1, k1_torsion).unwrap());
    }
    let refs: Vec<&Module> = parts.iter().collect();
    direct_sum(&refs).unwrap()
}

#[test]
fn phantom_one_point_rank_equality() {
    let m = one_point_st(2, 2, 0);
    let v = phantom_verdict(&PointedModule::new(m, vec![BigInt::from(1), BigInt::zero()]).unwrap()).unwrap();
    assert_eq!(v.phantom_criteria, Some(true));
    assert!(check(&v, "phantom.accordion").passed);

    let v = phantom_verdict(&pointed(one_point_st(1, 1, 2))).unwrap();
    assert_eq!(v.phantom_criteria, Some(false));
    assert!(!check(&v, "phantom.free.x").passed);

    let v = phantom_verdict(&pointed(one_point_st(2, 1, 0))).unwrap();
    assert!(!check(&v, "phantom.rank.x").passed);
}

#[test]
fn phantom_chain3_sum_of_extensions() {
    let s = Arc::new(chain(3));
    let parts = [
        extension_module(&s, 1, 0).unwrap(),
        extension_module(&s, 2, 1).unwrap(),
        point_module(&s, 0, 0, 0).unwrap(),
        point_module(&s, 2, 1, 0).unwrap(),
    ];
    let refs: Vec<&Module> = parts.iter().collect();
    let m = direct_sum(&refs).unwrap();
    for x in 0..3 {
        assert_eq!(m.st_group(Subset::singleton(x), 0).rank(), 1);
        assert_eq!(m.st_group(Subset::singleton(x), 1).rank(), 1);
    }
    let v = phantom_verdict(&pointed(m.clone())).unwrap();
    assert_eq!(v.phantom_criteria, Some(true), "{:?}", v.failures().collect::<Vec<_>>());
    let vb = phantom_verdict(&pointed(restrict(&m, Kind::B).unwrap())).unwrap();
    assert_eq!(vb.phantom_criteria, Some(true));

    // the extensions alone leave point 1 without K0 and point 3 without K1
    let m = direct_sum(&[&parts[0], &parts[1]]).unwrap();
    let v = phantom_verdict(&pointed(m)).unwrap();
    assert_eq!(v.phantom_criteria, Some(false));
    assert!(!check(&v, "phantom.rank.1").passed && check(&v, "phantom.rank.2").passed);
}

#[test]
fn phantom_needs_an_accordion() {
    let s = Arc::new(pseudocircle());
    let m = point_module(&s, 0, 0, 0).unwrap();
    match phantom_verdict(&pointed(m)) {
        Err(Error::NotApplicable(w)) => assert!(w.contains("cycle") || w.contains("neighbours")),
        other => panic!("expected NotApplicable, got {other:?}"),
    }
}

#[test]
fn phantom_rejects_non_exact_input() {
    let s = Arc::new(sierpinski());
    let mut b = ModuleBuilder::new(s.clone(), Kind::St);
    for o in objects(&s, Kind::St) {
        b.group(o, FgGroup::zero());
    }
    b.group(Obj::Lc(Subset::singleton(0), 1), z(1));
    b.group(Obj::Lc(Subset::singleton(1), 0), z(1));
    let (c, u) = (Subset::singleton(0), Subset::singleton(1));
    b.map(Arrow::D { from: c, to: u, parity: 1 }, IntMatrix::zeros(1, 1));
    let v = phantom_verdict(&pointed(b.build().unwrap())).unwrap();
    assert_eq!(v.phantom_criteria, Some(false));
    assert!(!check(&v, "st.exact").passed);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn phantom_verdict_is_invariant_under_isomorphism(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spaces = accordion_spaces(n);
        let s = Arc::new(spaces[seed as usize % spaces.len()].clone());
        let m = st_corpus(&s, 1, &mut rng).unwrap().pop().unwrap().module;
        let t = twist(&m, 5, &mut rng).unwrap().module;
        let (a, b) = (phantom_verdict(&pointed(m)).unwrap(), phantom_verdict(&pointed(t)).unwrap());
        prop_assert_eq!(a.phantom_criteria, b.phantom_criteria);
        let ids = |v: &Verdict| v.checks.iter().map(|c| (c.id.clone(), c.passed)).collect::<Vec<_>>();
        prop_assert_eq!(ids(&a), ids(&b));
    }

    #[test]
    fn b_side_ranks_agree_with_st_side(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let spaces = accordion_spaces(n);
        let s = Arc::new(spaces[seed as usize % spaces.len()].clone());
        for smp in st_corpus(&s, 2, &mut rng).unwrap() {
            let st = phantom_verdict(&pointed(smp.module.clone())).unwrap();
            let b = phantom_verdict(&pointed(restrict(&smp.module, Kind::B).unwrap())).unwrap();
            for x in s.names() {
                let id = format!("phantom.rank.{x}");
                prop_assert_eq!(check(&st, &id).passed, check(&b, &id).passed, "{} at {}", smp.label, x);
            }
        }
    }

    #[test]
    fn verdicts_are_monotone(k in 0usize..3, d in 0usize..3, o in 0usize..3, t in prop::option::of(2i64..6)) {
        let open = match t {
            Some(t) => FgGroup::direct_sum(&[&z(o), &FgGroup::cyclic(t)]),
            None => z(o),
        };
        let m = one_point_r(z(k), z(d), open).unwrap();
        let g = range_check_graph(&m).unwrap();
        let c = range_check_ck(&m).unwrap();
        let u = range_check_unital(&pointed(m)).unwrap();
        prop_assert!(g.is_monotone() && c.is_monotone() && u.is_monotone());
        if d == 0 {
            prop_assert_eq!(c.ck_realizable, Some(k == o));
            prop_assert_eq!(u.unital_graph_realizable, Some(k <= o));
        }
    }
}
