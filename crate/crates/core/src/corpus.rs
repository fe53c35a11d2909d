//! Deterministic module corpora: point, torsion and extension modules,
//! random twisted direct sums, and lifting problems built from
//! endomorphisms of multiplicity blocks.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::catalog::{extension_module, point_module};
use crate::error::Result;
use crate::functors::{direct_sum, restrict_map, twist};
use crate::invariants::{Kind, Module, ModuleMap, Obj};
use crate::space::FiniteSpace;
use crate::zmodule::IntMatrix;

#[derive(Clone, Debug)]
pub struct Sample {
    pub label: String,
    pub module: Module,
}

/// Indecomposable building blocks. With `free_odd` the parity-1 point
/// modules are restricted to `Z`.
pub fn building_blocks(space: &Arc<FiniteSpace>, free_odd: bool) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    let mut push = |label: String, module: Module| out.push(Sample { label, module });
    for x in 0..space.len() {
        let name = space.name(x).to_string();
        push(format!("Z@{name}:0"), point_module(space, x, 0, 0)?);
        push(format!("Z@{name}:1"), point_module(space, x, 1, 0)?);
        let n = 2 + (3 * x + 1) % 11;
        push(format!("Z/{n}@{name}:0"), point_module(space, x, 0, n as i64)?);
        if !free_odd {
            let n = 2 + (5 * x + 4) % 11;
            push(format!("Z/{n}@{name}:1"), point_module(space, x, 1, n as i64)?);
        }
    }
    for &(x, y) in space.covers() {
        push(format!("ext[{}->{}]", space.name(x), space.name(y)), extension_module(space, x, y)?);
    }
    Ok(out)
}

/// Building blocks followed by `sums` random twisted direct sums of two or
/// three blocks.
pub fn st_corpus<R: Rng>(space: &Arc<FiniteSpace>, sums: usize, rng: &mut R) -> Result<Vec<Sample>> {
    let mut out = building_blocks(space, false)?;
    let base = out.len();
    for k in 0..sums {
        let k_parts = rng.gen_range(2..=3);
        let parts: Vec<Sample> = out[..base].choose_multiple(rng, k_parts).cloned().collect();
        let label = parts.iter().map(|p| p.label.as_str()).collect::<Vec<_>>().join("+");
        let mods: Vec<&Module> = parts.iter().map(|p| &p.module).collect();
        let sum = direct_sum(&mods)?;
        let module = twist(&sum, 6, rng)?.module;
        out.push(Sample { label: format!("sum{k}[{label}]"), module });
    }
    Ok(out)
}

/// `K ⊗ id` on `S^{⊕a}` where `K` is `a × a`.
fn kron_identity(s: &Module, k: &IntMatrix) -> BTreeMap<Obj, IntMatrix> {
    let a = k.rows();
    s.groups()
        .iter()
        .map(|(o, g)| {
            let n = g.gens();
            let mut m = IntMatrix::zeros(a * n, a * n);
            for i in 0..a {
                for j in 0..a {
                    m.paste(i * n, j * n, &IntMatrix::scalar(n, k.get(i, j).clone()));
                }
            }
            (*o, m)
        })
        .collect()
}

fn random_square<R: Rng>(a: usize, rng: &mut R) -> IntMatrix {
    let rows = (0..a).map(|_| (0..a).map(|_| BigInt::from(rng.gen_range(-2..=2))).collect()).collect();
    IntMatrix::from_rows(rows, a).expect("square")
}

/// A lifting problem: ST-modules `m`, `n` and an R-map between their
/// R-restrictions.
#[derive(Clone, Debug)]
pub struct LiftCase {
    pub label: String,
    pub source: Module,
    pub target: Module,
    pub phi: ModuleMap,
}

/// Random lifting problems over `space`. The source is a sum of multiplicity
/// blocks `S^{⊕a}` of building blocks with free odd point groups; the map
/// is `⊕ K_S ⊗ id` followed by a random change of coordinates, with `K_S`
/// invertible in about half of the cases.
pub fn lift_cases<R: Rng>(space: &Arc<FiniteSpace>, count: usize, rng: &mut R) -> Result<Vec<LiftCase>> {
    let blocks = building_blocks(space, true)?;
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let k_parts = rng.gen_range(1..=2);
        let chosen: Vec<&Sample> = blocks.choose_multiple(rng, k_parts).collect();
        let mut parts = Vec::new();
        let mut endo = Vec::new();
        let mut label = Vec::new();
        let want_iso = rng.gen_bool(0.5);
        for s in &chosen {
            let a = rng.gen_range(1..=2);
            let kmat = if want_iso { unimodular_small(a, rng) } else { random_square(a, rng) };
            let copies: Vec<&Module> = vec![&s.module; a];
            let block = direct_sum(&copies)?;
            let comps = kron_identity(&s.module, &kmat);
            endo.push(ModuleMap::new(&block, &block, comps)?);
            parts.push(block);
            label.push(format!("{}^{a}", s.label));
        }
        let refs: Vec<&Module> = parts.iter().collect();
        let source = direct_sum(&refs)?;
        let maps: Vec<&ModuleMap> = endo.iter().collect();
        let e = ModuleMap::new(&source, &source, crate::functors::direct_sum_maps(&maps).components().clone())?;
        let tw = twist(&source, 6, rng)?;
        let phi = restrict_map(&e.then(&tw.iso), space, Kind::R);
        out.push(LiftCase { label: format!("case{k}[{}]", label.join("+")), source, target: tw.module, phi });
    }
    Ok(out)
}

fn unimodular_small<R: Rng>(a: usize, rng: &mut R) -> IntMatrix {
    let mut m = IntMatrix::identity(a);
    if a == 2 {
        let c = BigInt::from(rng.gen_range(-2..=2));
        if rng.gen_bool(0.5) {
            m.set(0, 1, c);
        } else {
            m.set(1, 0, c);
        }
    }
    if rng.gen_bool(0.5) {
        m.set(0, 0, -m.get(0, 0));
    }
    m
}
