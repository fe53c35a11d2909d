use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use filtk::catalog::*;
use filtk::corpus::{building_blocks, st_corpus};
use filtk::functors::*;
use filtk::invariants::*;
use filtk::space::{FiniteSpace, Subset};
use filtk::zmodule::{FgGroup, IntMatrix};
use filtk::Error;

/// Multiplication by `c` in every slot.
fn scalar_map(m: &Module, c: i64) -> ModuleMap {
    let comps: BTreeMap<Obj, IntMatrix> =
        m.groups().iter().map(|(o, g)| (*o, IntMatrix::scalar(g.gens(), BigInt::from(c)))).collect();
    ModuleMap::new(m, m, comps).unwrap()
}

fn slot(m: &Module, y: &[usize], p: u8) -> String {
    let set = y.iter().fold(Subset::default(), |a, &x| a.with(x));
    m.st_group(set, p).describe()
}

#[test]
fn extension_restricted_to_b() {
    let b = restrict(&sierpinski_extension(), Kind::B).unwrap();
    assert_eq!(b.group(&Obj::Cl(0)).describe(), "Z");
    assert_eq!(b.group(&Obj::Open(1)).describe(), "Z");
    assert_eq!(b.group(&Obj::Cl(1)).describe(), "0");
    assert_eq!(b.group(&Obj::Open(0)).describe(), "0");
    assert_eq!(b.map(&Arrow::Bd(1, 0)).to_i64_rows().unwrap(), vec![vec![1]]);
}

#[test]
fn point_modules_restrict_to_even_b_modules() {
    let s = Arc::new(chain(3));
    for x in 0..3 {
        let b = restrict(&point_module(&s, x, 0, 0).unwrap(), Kind::B).unwrap();
        assert!((0..3).all(|y| b.group(&Obj::Cl(y)).is_trivial()));
    }
}

#[test]
fn point_modules_restrict_to_r() {
    let s = Arc::new(sierpinski());
    for x in 0..2 {
        let r = restrict(&point_module(&s, x, 0, 0).unwrap(), Kind::R).unwrap();
        assert_eq!(r.group(&Obj::Open(0)).describe(), "Z");
        assert_eq!(r.group(&Obj::Open(1)).describe(), if x == 1 { "Z" } else { "0" });
    }
}

#[test]
fn tb_to_r_examples() {
    let tb = restrict(&sierpinski_extension(), Kind::Tb).unwrap();
    let r = tb_to_r(&tb).unwrap();
    assert_eq!(r.group(&Obj::Bd(0)).describe(), "Z");
    assert_eq!(r.group(&Obj::Open(1)).describe(), "Z");
    assert_eq!(r.map(&Arrow::Delta(0)).to_i64_rows().unwrap(), vec![vec![1]]);

    let one = Arc::new(one_point());
    let r = tb_to_r(&restrict(&point_module(&one, 0, 0, 0).unwrap(), Kind::Tb).unwrap()).unwrap();
    assert!(r.group(&Obj::Bd(0)).is_trivial());

    let s = Arc::new(chain(3));
    let r = tb_to_r(&restrict(&point_module(&s, 2, 0, 0).unwrap(), Kind::Tb).unwrap()).unwrap();
    assert!((0..3).all(|x| r.map(&Arrow::Delta(x)).is_zero()));
    assert!(matches!(tb_to_r(&r), Err(Error::InvalidModule(_))));
}

#[test]
fn reconstruct_sierpinski_extension() {
    let g = reconstruct(&restrict(&sierpinski_extension(), Kind::B).unwrap()).unwrap().module;
    assert_eq!(slot(&g, &[0, 1], 0), "0");
    assert_eq!(slot(&g, &[0, 1], 1), "0");
    assert_eq!(slot(&g, &[0], 0), "0");
    assert_eq!(slot(&g, &[1], 1), "0");
    assert_eq!(slot(&g, &[0], 1), "Z");
    assert_eq!(slot(&g, &[1], 0), "Z");
    assert!(validate_module(&g).passed && is_exact(&g).passed && is_rrz(&g));
}

#[test]
fn reconstruct_point_modules_on_a_chain() {
    let s = Arc::new(chain(3));
    for x in 0..3 {
        let p = point_module(&s, x, 0, 0).unwrap();
        let g = reconstruct(&restrict(&p, Kind::B).unwrap()).unwrap().module;
        for (o, grp) in p.groups() {
            assert_eq!(grp.invariants(), g.group(o).invariants(), "P_{x} at {}", o.key(&s));
        }
    }
}

#[test]
fn reconstruct_on_the_one_point_space() {
    let one = Arc::new(one_point());
    let a = point_module(&one, 0, 0, 0).unwrap();
    let b = point_module(&one, 0, 1, 3).unwrap();
    let m = direct_sum(&[&a, &b]).unwrap();
    let g = reconstruct(&restrict(&m, Kind::B).unwrap()).unwrap().module;
    assert_eq!(slot(&g, &[0], 0), "Z");
    assert_eq!(slot(&g, &[0], 1), "Z/3");
}

#[test]
fn eta_is_an_isomorphism() {
    let s = Arc::new(zigzag4());
    let parts: Vec<Module> = (0..4).map(|x| point_module(&s, x, (x % 2) as u8, 0).unwrap()).collect();
    let refs: Vec<&Module> = parts.iter().collect();
    let m = direct_sum(&refs).unwrap();
    let (g, eta) = compute_eta(&m).unwrap();
    assert!(eta.is_iso(&m, &g.module));

    let ext = sierpinski_extension();
    let (g, eta) = compute_eta(&ext).unwrap();
    assert!(eta.is_iso(&ext, &g.module));
    assert!(eta.components().values().all(|c| c.rows() <= 1));
}

#[test]
fn eta_on_a_reconstruction_has_identity_base() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let s = Arc::new(chain(4));
    let m = st_corpus(&s, 3, &mut rng).unwrap().pop().unwrap().module;
    let g = reconstruct(&restrict(&m, Kind::B).unwrap()).unwrap().module;
    let (h, eta) = compute_eta(&g).unwrap();
    assert!(eta.is_iso(&g, &h.module));
    let on_b = restrict_map(&eta, &s, Kind::B);
    assert!(on_b.equals(&ModuleMap::identity(&restrict(&g, Kind::B).unwrap()), &restrict(&h.module, Kind::B).unwrap()));
}

#[test]
fn non_ebp_spaces_are_rejected() {
    let q = Arc::new(q_space());
    let mut b = ModuleBuilder::new(q.clone(), Kind::B);
    for o in objects(&q, Kind::B) {
        b.group(o, FgGroup::zero());
    }
    let m = b.build().unwrap();
    assert!(matches!(reconstruct(&m), Err(Error::SpaceNotEBP(_))));
}

#[test]
fn non_exact_input_is_rejected() {
    let s = Arc::new(sierpinski());
    let mut b = ModuleBuilder::new(s.clone(), Kind::B);
    for o in objects(&s, Kind::B) {
        b.group(o, FgGroup::zero());
    }
    b.group(Obj::Cl(0), FgGroup::free(1)).group(Obj::Open(1), FgGroup::free(1));
    b.map(Arrow::Bd(1, 0), IntMatrix::scalar(1, BigInt::from(2)));
    assert!(matches!(reconstruct(&b.build().unwrap()), Err(Error::InputNotExact(_))));
}

#[test]
fn delta_decomposition_detects_a_perturbation() {
    let s = Arc::new(chain(3));
    let parts = [extension_module(&s, 1, 0).unwrap(), extension_module(&s, 2, 1).unwrap()];
    let g = reconstruct(&restrict(&direct_sum(&[&parts[0], &parts[1]]).unwrap(), Kind::B).unwrap()).unwrap().module;
    assert!(verify_delta_decomposition(&g).passed);
    // δ from {1} to {2,3}: a sum over the single arrow 2 -> 1
    let (c, u) = (Subset::singleton(0), Subset::singleton(1).with(2));
    let bad = perturbed(&g, Arrow::D { from: c, to: u, parity: 1 }).unwrap();
    let rep = verify_delta_decomposition(&bad);
    assert!(!rep.passed);
    assert!(rep.failure.is_some());
}

#[test]
fn identity_lifts_to_identity() {
    let tb = restrict(&sierpinski_extension(), Kind::Tb).unwrap();
    let r = tb_to_r(&tb).unwrap();
    let lifted = lift_r_morphism(&tb, &tb, &ModuleMap::identity(&r)).unwrap();
    assert!(lifted.equals(&ModuleMap::identity(&tb), &tb));
}

#[test]
fn negation_lifts_on_the_sierpinski_extension() {
    let m = sierpinski_extension();
    let s = m.space_arc().clone();
    let tb = restrict(&m, Kind::Tb).unwrap();
    let r = tb_to_r(&tb).unwrap();
    let lifted = lift_r_morphism(&tb, &tb, &scalar_map(&r, -1)).unwrap();
    assert_eq!(lifted.component(&Obj::Cl(0)).to_i64_rows().unwrap(), vec![vec![-1]]);
    assert!(lifted.is_iso(&tb, &tb));

    let rm = restrict(&m, Kind::R).unwrap();
    let st = lift_to_st(&m, &m, &scalar_map(&rm, -1)).unwrap();
    assert!(st.equals(&scalar_map(&m, -1), &m));
    assert!(restrict_map(&st, &s, Kind::R).equals(&scalar_map(&rm, -1), &rm));
}

#[test]
fn unit_multiple_on_torsion_lifts_to_an_iso() {
    let s = Arc::new(sierpinski());
    let m = direct_sum(&[&point_module(&s, 1, 0, 6).unwrap(), &sierpinski_extension()]).unwrap();
    let tb = restrict(&m, Kind::Tb).unwrap();
    let r = tb_to_r(&tb).unwrap();
    // 5 on the Z/6 summand, identity on the extension
    let torsion = restrict(&point_module(&s, 1, 0, 6).unwrap(), Kind::R).unwrap();
    let comps = r
        .groups()
        .iter()
        .map(|(o, g)| {
            let k = torsion.group(o).gens();
            let mut mat = IntMatrix::identity(g.gens());
            for i in 0..k {
                mat.set(i, i, BigInt::from(5));
            }
            (*o, mat)
        })
        .collect();
    let phi = ModuleMap::new(&r, &r, comps).unwrap();
    assert!(phi.is_iso(&r, &r));
    let lifted = lift_r_morphism(&tb, &tb, &phi).unwrap();
    assert!(lifted.is_iso(&tb, &tb));
    assert!(tb_to_r_map(&lifted, &s).equals(&phi, &r));
}

#[test]
fn mixing_summands_on_a_chain() {
    let s = Arc::new(chain(3));
    let p = point_module(&s, 1, 0, 0).unwrap();
    let m = direct_sum(&[&p, &p]).unwrap();
    let rm = restrict(&m, Kind::R).unwrap();
    let comps = rm
        .groups()
        .iter()
        .map(|(o, g)| {
            let mat = if g.gens() == 2 { IntMatrix::from_i64(&[vec![1, 1], vec![0, 1]], 2) } else { IntMatrix::identity(g.gens()) };
            (*o, mat)
        })
        .collect();
    let phi = ModuleMap::new(&rm, &rm, comps).unwrap();
    let st = lift_to_st(&m, &m, &phi).unwrap();
    assert!(st.is_iso(&m, &m));
    assert!(restrict_map(&st, &s, Kind::R).equals(&phi, &rm));
}

#[test]
fn torsion_odd_point_groups_break_freeness() {
    // k1 of the closed point is Z/2, so cl:2 / u(k1:2) = Z / 2Z is not free
    let s = Arc::new(sierpinski());
    let (one, two) = (Subset::singleton(0), Subset::singleton(1));
    let mut b = ModuleBuilder::new(s.clone(), Kind::St);
    for o in objects(&s, Kind::St) {
        b.group(o, FgGroup::zero());
    }
    b.group(Obj::Lc(two, 1), FgGroup::free(1)).group(Obj::Lc(s.all(), 1), FgGroup::free(1));
    b.group(Obj::Lc(one, 1), FgGroup::cyclic(2));
    b.map(Arrow::I { from: two, to: s.all(), parity: 1 }, IntMatrix::scalar(1, BigInt::from(2)));
    b.map(Arrow::R { from: s.all(), to: one, parity: 1 }, IntMatrix::identity(1));
    let m = b.build().unwrap();
    assert!(validate_module(&m).passed && is_exact(&m).passed);
    let tb = restrict(&m, Kind::Tb).unwrap();
    let r = tb_to_r(&tb).unwrap();
    assert!(matches!(lift_r_morphism(&tb, &tb, &ModuleMap::identity(&r)), Err(Error::FreenessHypothesisFailed(_))));
}

#[test]
fn relabeling_commutes_with_reconstruction() {
    let s = Arc::new(zigzag4());
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = st_corpus(&s, 2, &mut rng).unwrap().pop().unwrap().module;
    let perm = [2, 0, 3, 1];
    let moved = relabel(&m, &perm).unwrap();
    let g1 = reconstruct(&restrict(&m, Kind::B).unwrap()).unwrap().module;
    let g2 = reconstruct(&restrict(&moved, Kind::B).unwrap()).unwrap().module;
    let moved_g = relabel(&g1, &perm).unwrap();
    for (o, grp) in moved_g.groups() {
        assert_eq!(grp.invariants(), g2.group(o).invariants());
    }
}

#[test]
fn pushforward_extends_by_zero() {
    let s = Arc::new(chain(3));
    let ext = extension_module(&s, 2, 1).unwrap();
    assert_eq!(slot(&ext, &[1], 1), "Z");
    assert_eq!(slot(&ext, &[2], 0), "Z");
    assert_eq!(slot(&ext, &[0], 0), "0");
    assert!(validate_module(&ext).passed && is_exact(&ext).passed);
    let sub = FiniteSpace::new(&["a"], &[]).unwrap();
    assert!(pushforward(&point_module(&Arc::new(sub), 0, 0, 0).unwrap(), &s, Subset::singleton(0).with(2)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn round_trip_on_twisted_sums(seed in any::<u64>(), which in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (_, s) = corpus_spaces().swap_remove(which);
        let s = Arc::new(s);
        let m = st_corpus(&s, 1, &mut rng).unwrap().pop().unwrap().module;
        let m = twist(&m, 4, &mut rng).unwrap().module;
        let b = restrict(&m, Kind::B).unwrap();
        let g = reconstruct(&b).unwrap();
        prop_assert_eq!(&restrict(&g.module, Kind::B).unwrap(), &b);
        prop_assert!(verify_delta_decomposition(&g.module).passed);
        let (h, eta) = compute_eta(&m).unwrap();
        prop_assert!(eta.is_iso(&m, &h.module));
    }

    #[test]
    fn blocks_lift_their_automorphisms(which in 0usize..5, c in prop::sample::select(vec![-1i64, 1])) {
        let (_, s) = corpus_spaces().swap_remove(which);
        let s = Arc::new(s);
        for smp in building_blocks(&s, true).unwrap() {
            let m = &smp.module;
            let rm = restrict(m, Kind::R).unwrap();
            let st = lift_to_st(m, m, &scalar_map(&rm, c)).unwrap();
            prop_assert!(st.is_iso(m, m));
        }
    }
}
