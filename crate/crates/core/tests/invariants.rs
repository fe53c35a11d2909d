use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use filtk::catalog::*;
use filtk::corpus::st_corpus;
use filtk::functors::{restrict, twist};
use filtk::invariants::*;
use filtk::space::{FiniteSpace, Subset};
use filtk::zmodule::{FgGroup, IntMatrix};
use filtk::Error;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn zero_builder(s: &Arc<FiniteSpace>, kind: Kind) -> ModuleBuilder {
    let mut b = ModuleBuilder::new(s.clone(), kind);
    for o in objects(s, kind) {
        b.group(o, FgGroup::zero());
    }
    b
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Sierpinski ST-module with `Z` at `({1},p)` and `({2},1-p)` joined by the
/// boundary map `d`.
fn sierpinski_pair(p: u8, d: i64) -> Module {
    let s = Arc::new(sierpinski());
    let (c, u) = (Subset::singleton(0), Subset::singleton(1));
    let mut b = zero_builder(&s, Kind::St);
    b.group(Obj::Lc(c, p), FgGroup::free(1)).group(Obj::Lc(u, 1 - p), FgGroup::free(1));
    b.map(Arrow::D { from: c, to: u, parity: p }, IntMatrix::from_i64(&[vec![d]], 1));
    b.build().unwrap()
}

#[test]
fn sierpinski_extension_is_valid_exact_rrz() {
    let m = sierpinski_extension();
    assert!(validate_module(&m).passed);
    assert!(is_exact(&m).passed);
    assert!(is_rrz(&m));
    assert_eq!(m, sierpinski_pair(1, 1));
}

#[test]
fn point_modules_pass_everywhere() {
    for (_, s) in corpus_spaces() {
        let s = Arc::new(s);
        for x in 0..s.len() {
            for p in 0..2 {
                for n in [0, 4] {
                    let m = point_module(&s, x, p, n).unwrap();
                    assert!(validate_module(&m).passed, "P_{x} parity {p}");
                    assert!(is_exact(&m).passed);
                    assert!(is_rrz(&m));
                }
            }
        }
    }
}

#[test]
fn zero_boundary_map_is_not_exact() {
    let m = sierpinski_pair(1, 0);
    assert!(validate_module(&m).passed);
    let rep = is_exact(&m);
    assert!(!rep.passed);
    assert!(rep.failure.is_some());
    // multiplication by 2 leaves a Z/2 cokernel
    assert!(!is_exact(&sierpinski_pair(1, 2)).passed);
}

#[test]
fn even_to_odd_boundary_map_is_not_rrz() {
    let m = sierpinski_pair(0, 1);
    assert!(is_exact(&m).passed);
    assert!(!is_rrz(&m));
}

#[test]
fn modules_without_odd_groups_are_rrz() {
    let s = Arc::new(chain(3));
    let m = point_module(&s, 1, 0, 3).unwrap();
    assert!(is_rrz(&m));
}

#[test]
fn missing_groups_are_reported() {
    let s = Arc::new(sierpinski());
    let mut b = ModuleBuilder::new(s.clone(), Kind::St);
    b.group(Obj::Lc(Subset::singleton(0), 1), FgGroup::free(1));
    assert!(matches!(b.build(), Err(Error::ShapeIncomplete(_))));
}

#[test]
fn perturbed_fixture_fails_a_relation() {
    let (m, _) = load_module(&fixture("chain3_extension_perturbed_delta_st.json")).unwrap();
    let rep = validate_module(&m);
    assert!(!rep.passed);
    assert!(rep.failure.unwrap().starts_with("(7)"));
}

#[test]
fn fixtures_load_and_pass() {
    for f in [
        "sierpinski_extension_st.json",
        "sierpinski_extension_b.json",
        "sierpinski_extension_r.json",
        "sierpinski_extension_tb.json",
        "chain3_point_2_even_st.json",
        "chain3_point_1_odd_z2_st.json",
        "chain3_extension_2_1_st.json",
    ] {
        let (m, unit) = load_module(&fixture(f)).unwrap();
        assert!(unit.is_none());
        assert!(validate_module(&m).passed, "{f}");
        assert!(is_exact(&m).passed, "{f}");
    }
    let (m, unit) = load_module(&fixture("one_point_z2_z2_pointed_st.json")).unwrap();
    assert_eq!(unit, Some(ints(&[1, 0])));
    assert_eq!(m.st_group(m.space().all(), 0).describe(), "Z^2");
}

#[test]
fn unknown_keys_and_bad_units_are_errors() {
    let space = serde_json::from_str::<serde_json::Value>(&sierpinski().to_json()).unwrap();
    let v = serde_json::json!({"space": space, "kind": "st", "groups": {"lc:3:0": {"gens": 1}}});
    assert!(matches!(module_from_value(v, None), Err(Error::UnknownKey(_))));
    let v = serde_json::json!({"space": space, "kind": "r", "groups": {"lc:1:0": {"gens": 1}}});
    assert!(module_from_value(v, None).is_err());
    let mut v = module_to_value(&restrict(&sierpinski_extension(), Kind::R).unwrap(), None);
    v["unit"] = serde_json::json!("one");
    assert!(matches!(module_from_value(v, None), Err(Error::Parse(_))));
}

#[test]
fn b_and_tb_need_unique_paths() {
    let d = Arc::new(diamond());
    let b = ModuleBuilder::new(d, Kind::B);
    assert!(matches!(b.build(), Err(Error::SpaceNotUniquePath(_))));
}

#[test]
fn json_round_trip_every_kind() {
    let m = sierpinski_extension();
    for kind in [Kind::St, Kind::B, Kind::R, Kind::Tb] {
        let r = restrict(&m, kind).unwrap();
        let unit = ints(&vec![0; unit_receptacle(&r).unwrap().sum.gens()]);
        let v = module_to_value(&r, Some(&unit));
        let (back, u) = module_from_value(v, None).unwrap();
        assert_eq!(back, r);
        assert_eq!(u, Some(unit));
    }
}

#[test]
fn restrictions_of_exact_modules_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let s = Arc::new(chain(3));
    for smp in st_corpus(&s, 6, &mut rng).unwrap() {
        for kind in [Kind::B, Kind::R, Kind::Tb] {
            let r = restrict(&smp.module, kind).unwrap();
            assert!(validate_module(&r).passed, "{} {kind}", smp.label);
            assert!(is_exact(&r).passed, "{} {kind}", smp.label);
        }
    }
}

#[test]
fn receptacle_of_sierpinski_with_dead_inclusion_is_trivial() {
    let s = Arc::new(sierpinski());
    let mut b = zero_builder(&s, Kind::B);
    b.group(Obj::Open(1), FgGroup::free(1));
    let m = b.build().unwrap();
    let rec = unit_receptacle(&m).unwrap();
    assert_eq!(rec.sum.describe(), "Z");
    assert!(rec.group.is_trivial());
}

#[test]
fn receptacles_without_upper_bounds() {
    let one = Arc::new(one_point());
    let m = restrict(&point_module(&one, 0, 0, 5).unwrap(), Kind::R).unwrap();
    assert_eq!(unit_receptacle(&m).unwrap().group.describe(), "Z/5");

    let two = Arc::new(FiniteSpace::new(&["a", "b"], &[]).unwrap());
    let mut b = zero_builder(&two, Kind::B);
    b.group(Obj::Open(0), FgGroup::free(1)).group(Obj::Open(1), FgGroup::cyclic(2));
    let rec = unit_receptacle(&b.build().unwrap()).unwrap();
    assert_eq!(rec.relations.rows(), 0);
    assert_eq!(rec.group.describe(), "Z + Z/2");
}

/// Sierpinski B-module with `Z` at both opens and identity inclusion.
fn sierpinski_open_b() -> Module {
    let s = Arc::new(sierpinski());
    let mut b = zero_builder(&s, Kind::B);
    b.group(Obj::Open(0), FgGroup::free(1)).group(Obj::Open(1), FgGroup::free(1));
    b.map(Arrow::Inc(1, 0), IntMatrix::identity(1));
    b.build().unwrap()
}

#[test]
fn pointed_maps() {
    let m = sierpinski_open_b();
    let id = ModuleMap::identity(&m);
    let p = |u: &[i64]| PointedModule::new(m.clone(), ints(u)).unwrap();
    assert!(check_pointed_map(&id, &p(&[1, 0]), &p(&[1, 0])).unwrap());
    // (1,0) and (0,1) differ by the relation from the common upper bound
    assert!(check_pointed_map(&id, &p(&[1, 0]), &p(&[0, 1])).unwrap());
    assert!(!check_pointed_map(&id, &p(&[1, 0]), &p(&[2, 0])).unwrap());
    let neg: BTreeMap<Obj, IntMatrix> = m.groups().iter().map(|(o, g)| (*o, -&IntMatrix::identity(g.gens()))).collect();
    let neg = ModuleMap::new(&m, &m, neg).unwrap();
    assert!(!check_pointed_map(&neg, &p(&[1, 0]), &p(&[1, 0])).unwrap());
    assert!(check_pointed_map(&neg, &p(&[1, 0]), &p(&[-1, 0])).unwrap());
    assert!(matches!(PointedModule::new(m, ints(&[1])), Err(Error::ShapeMismatch(_))));
}

#[test]
fn maps_must_commute() {
    let m = sierpinski_open_b();
    let mut comps: BTreeMap<Obj, IntMatrix> = m.groups().iter().map(|(o, g)| (*o, IntMatrix::identity(g.gens()))).collect();
    comps.insert(Obj::Open(0), IntMatrix::scalar(1, BigInt::from(2)));
    assert!(ModuleMap::new(&m, &m, comps).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn twisting_preserves_the_checks(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Arc::new(zigzag4());
        let ms = st_corpus(&s, 2, &mut rng).unwrap();
        let m = &ms[ms.len() - 1 - (seed as usize % 4)].module;
        let t = twist(m, 5, &mut rng).unwrap();
        prop_assert!(validate_module(&t.module).passed);
        prop_assert!(is_exact(&t.module).passed);
        prop_assert_eq!(is_rrz(&t.module), is_rrz(m));
        prop_assert!(t.iso.is_iso(m, &t.module));
        for (o, g) in m.groups() {
            prop_assert_eq!(g.invariants(), t.module.group(o).invariants());
        }
    }
}
