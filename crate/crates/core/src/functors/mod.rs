//! Functors between the module categories: restrictions, the passage from
//! TB to R, the reconstruction functor from B to ST with its natural
//! isomorphism, and lifting of R-level homomorphisms.

mod delta;
mod lift;
mod ops;
mod reconstruct;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::invariants::{Arrow, Kind, Module, ModuleBuilder, ModuleMap, Obj};
use crate::space::{FiniteSpace, Subset};
use crate::zmodule::{FgGroup, IntMatrix};

pub use delta::verify_delta_decomposition;
pub use lift::{lift_r_morphism, lift_to_st, r_map_to_tb_r};
pub use ops::{direct_sum, direct_sum_maps, pushforward, relabel, twist, Twist};
pub use reconstruct::{compute_eta, reconstruct, reconstruct_st, Reconstruction};

/// The ST object that a point-indexed object stands for.
pub fn st_object(s: &FiniteSpace, o: &Obj) -> Obj {
    match *o {
        Obj::K1(x) => Obj::Lc(Subset::singleton(x), 1),
        Obj::Bd(x) => Obj::Lc(s.up(x).without(x), 0),
        Obj::Open(x) => Obj::Lc(s.up(x), 0),
        Obj::Cl(x) => Obj::Lc(s.down(x), 1),
        Obj::Lc(..) => *o,
    }
}

/// The ST generator that a point-indexed arrow stands for.
pub fn st_arrow(s: &FiniteSpace, kind: Kind, a: &Arrow) -> Arrow {
    match *a {
        Arrow::Res(x, y) => Arrow::R { from: s.down(x), to: s.down(y), parity: 1 },
        Arrow::Bd(x, y) => Arrow::D { from: s.down(y), to: s.up(x), parity: 1 },
        Arrow::Inc(x, y) => Arrow::I { from: s.up(x), to: s.up(y), parity: 0 },
        Arrow::IncBd(y, x) => Arrow::I { from: s.up(y), to: s.up(x).without(x), parity: 0 },
        Arrow::U(x) if kind == Kind::R => Arrow::I { from: s.up(x).without(x), to: s.up(x), parity: 0 },
        Arrow::U(x) => Arrow::I { from: Subset::singleton(x), to: s.down(x), parity: 1 },
        Arrow::Delta(x) => Arrow::D { from: Subset::singleton(x), to: s.up(x).without(x), parity: 1 },
        Arrow::I { .. } | Arrow::R { .. } | Arrow::D { .. } => *a,
    }
}

/// Restriction of an ST-module to B, R or TB.
pub fn restrict(m: &Module, kind: Kind) -> Result<Module> {
    if m.kind() != Kind::St {
        return Err(Error::InvalidModule(format!("restriction expects an ST-module, got {}", m.kind())));
    }
    if kind == Kind::St {
        return Ok(m.clone());
    }
    let s = m.space();
    if matches!(kind, Kind::B | Kind::Tb) && !s.is_unique_path() {
        return Err(Error::SpaceNotUniquePath(format!("restriction to {kind}")));
    }
    let mut b = ModuleBuilder::new(m.space_arc().clone(), kind);
    for o in crate::invariants::objects(s, kind) {
        b.group(o, m.group(&st_object(s, &o)).clone());
    }
    for a in crate::invariants::arrows(s, kind) {
        b.map(a, m.map(&st_arrow(s, kind, &a)).clone());
    }
    b.build()
}

/// Restriction of an ST-module map.
pub fn restrict_map(f: &ModuleMap, s: &FiniteSpace, kind: Kind) -> ModuleMap {
    let comps = crate::invariants::objects(s, kind)
        .into_iter()
        .map(|o| (o, f.component(&st_object(s, &o)).clone()))
        .collect();
    ModuleMap::raw(kind, comps)
}

/// Forgets the `k1` part of a TB-module.
pub fn tb_to_b(m: &Module) -> Result<Module> {
    let s = m.space();
    let mut b = ModuleBuilder::new(m.space_arc().clone(), Kind::B);
    for o in crate::invariants::objects(s, Kind::B) {
        b.group(o, m.group(&o).clone());
    }
    for a in crate::invariants::arrows(s, Kind::B) {
        b.map(a, m.map(&a).clone());
    }
    b.build()
}

pub fn tb_to_b_map(f: &ModuleMap, s: &FiniteSpace) -> ModuleMap {
    let comps = crate::invariants::objects(s, Kind::B).into_iter().map(|o| (o, f.component(&o).clone())).collect();
    ModuleMap::raw(Kind::B, comps)
}

/// Cover parents of `x`, the summands of `bd x` in [`tb_to_r`].
fn bd_summands(s: &FiniteSpace, x: usize) -> Vec<usize> {
    s.cover_parents(x).iter().collect()
}

/// The R-module of a TB-module: `bd x` becomes `⊕_{y->x} open y`.
pub fn tb_to_r(m: &Module) -> Result<Module> {
    if m.kind() != Kind::Tb {
        return Err(Error::InvalidModule(format!("expected a TB-module, got {}", m.kind())));
    }
    let s = m.space();
    let mut b = ModuleBuilder::new(m.space_arc().clone(), Kind::R);
    for x in 0..s.len() {
        let ys = bd_summands(s, x);
        let parts: Vec<&FgGroup> = ys.iter().map(|&y| m.group(&Obj::Open(y))).collect();
        let bd = FgGroup::direct_sum(&parts);
        let k1 = m.group(&Obj::K1(x));
        b.group(Obj::K1(x), k1.clone());
        b.group(Obj::Open(x), m.group(&Obj::Open(x)).clone());
        let u = m.map(&Arrow::U(x));
        let delta = ys.iter().fold(IntMatrix::zeros(k1.gens(), 0), |acc, &y| acc.hstack(&(u * m.map(&Arrow::Bd(y, x)))));
        let incs: Vec<&IntMatrix> = ys.iter().map(|&y| m.map(&Arrow::Inc(y, x))).collect();
        let cols = m.group(&Obj::Open(x)).gens();
        b.map(Arrow::Delta(x), delta);
        b.map(Arrow::U(x), IntMatrix::vstack_all(cols, &incs));
        let mut off = 0;
        for (&y, part) in ys.iter().zip(&parts) {
            let mut inj = IntMatrix::zeros(part.gens(), bd.gens());
            inj.paste(0, off, &IntMatrix::identity(part.gens()));
            off += part.gens();
            b.map(Arrow::IncBd(y, x), inj);
        }
        b.group(Obj::Bd(x), bd);
    }
    b.build()
}

/// [`tb_to_r`] on maps.
pub fn tb_to_r_map(f: &ModuleMap, s: &FiniteSpace) -> ModuleMap {
    let mut comps = BTreeMap::new();
    for x in 0..s.len() {
        comps.insert(Obj::K1(x), f.component(&Obj::K1(x)).clone());
        comps.insert(Obj::Open(x), f.component(&Obj::Open(x)).clone());
        let blocks: Vec<&IntMatrix> = bd_summands(s, x).into_iter().map(|y| f.component(&Obj::Open(y))).collect();
        comps.insert(Obj::Bd(x), IntMatrix::block_diag(&blocks));
    }
    ModuleMap::raw(Kind::R, comps)
}
