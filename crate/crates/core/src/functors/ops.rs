//! Constructions on modules: direct sums, coordinate changes, relabelling
//! of points and pushforward from a locally closed subspace.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::invariants::{arrows, objects, Arrow, Kind, Module, ModuleBuilder, ModuleMap, Obj};
use crate::space::{FiniteSpace, Subset};
use crate::zmodule::{FgGroup, IntMatrix};

/// Slotwise direct sum of modules of one kind over one space.
pub fn direct_sum(parts: &[&Module]) -> Result<Module> {
    let first = parts.first().ok_or_else(|| Error::InvalidModule("empty direct sum".into()))?;
    let (s, kind) = (first.space_arc().clone(), first.kind());
    if parts.iter().any(|m| m.kind() != kind || m.space() != &*s) {
        return Err(Error::ShapeMismatch("direct sum of modules of different kinds or spaces".into()));
    }
    let mut b = ModuleBuilder::new(s.clone(), kind);
    for o in objects(&s, kind) {
        let gs: Vec<&FgGroup> = parts.iter().map(|m| m.group(&o)).collect();
        b.group(o, FgGroup::direct_sum(&gs));
    }
    for a in arrows(&s, kind) {
        let ms: Vec<&IntMatrix> = parts.iter().map(|m| m.map(&a)).collect();
        b.map(a, IntMatrix::block_diag(&ms));
    }
    b.build()
}

/// Slotwise direct sum of maps, between the direct sums of their sources
/// and targets.
pub fn direct_sum_maps(parts: &[&ModuleMap]) -> ModuleMap {
    let kind = parts[0].kind();
    let comps = parts[0]
        .components()
        .keys()
        .map(|o| {
            let ms: Vec<&IntMatrix> = parts.iter().map(|f| f.component(o)).collect();
            (*o, IntMatrix::block_diag(&ms))
        })
        .collect();
    ModuleMap::raw(kind, comps)
}

/// A module in new coordinates, with the isomorphism from the original.
#[derive(Clone, Debug)]
pub struct Twist {
    pub module: Module,
    pub iso: ModuleMap,
}

/// Random unimodular matrix with its inverse.
fn unimodular<R: Rng>(n: usize, steps: usize, rng: &mut R) -> (IntMatrix, IntMatrix) {
    let mut t = IntMatrix::identity(n);
    let mut inv = IntMatrix::identity(n);
    if n == 0 {
        return (t, inv);
    }
    for _ in 0..steps {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        let mut e = IntMatrix::identity(n);
        let mut e_inv = IntMatrix::identity(n);
        if i == j {
            e.set(i, i, BigInt::from(-1));
            e_inv.set(i, i, BigInt::from(-1));
        } else {
            let c: i64 = if rng.gen_bool(0.5) { rng.gen_range(1..=2) } else { -rng.gen_range(1..=2) };
            e.set(i, j, BigInt::from(c));
            e_inv.set(i, j, BigInt::from(-c));
        }
        t = &e * &t;
        inv = &inv * &e_inv;
    }
    (t, inv)
}

/// Changes the generators of every group by a random unimodular matrix.
pub fn twist<R: Rng>(m: &Module, steps: usize, rng: &mut R) -> Result<Twist> {
    let s = m.space_arc().clone();
    let mut change = BTreeMap::new();
    let mut b = ModuleBuilder::new(s.clone(), m.kind());
    for (o, g) in m.groups() {
        let (t, inv) = unimodular(g.gens(), steps, rng);
        b.group(*o, FgGroup::new(g.gens(), g.rels() * &t)?);
        change.insert(*o, (t, inv));
    }
    for (a, mat) in m.maps() {
        let (src, tgt) = (a.source(m.kind()), a.target(m.kind()));
        b.map(*a, &(&change[&src].1 * mat) * &change[&tgt].0);
    }
    let module = b.build()?;
    let comps = change.into_iter().map(|(o, (t, _))| (o, t)).collect();
    let iso = ModuleMap::new(m, &module, comps)?;
    Ok(Twist { module, iso })
}

fn map_subset(s: Subset, f: &[usize]) -> Subset {
    Subset::from_indices(s.iter().map(|i| f[i]))
}

/// The same module on the space reordered by `perm` (new point `i` is old
/// point `perm[i]`).
pub fn relabel(m: &Module, perm: &[usize]) -> Result<Module> {
    let s = m.space();
    if perm.len() != s.len() {
        return Err(Error::ShapeMismatch(format!("permutation of length {} for {} points", perm.len(), s.len())));
    }
    let mut inv = vec![usize::MAX; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        if p >= inv.len() || inv[p] != usize::MAX {
            return Err(Error::Parse("not a permutation".into()));
        }
        inv[p] = i;
    }
    let space = Arc::new(s.permuted(perm)?);
    let obj = |o: &Obj| match *o {
        Obj::Lc(y, p) => Obj::Lc(map_subset(y, &inv), p),
        Obj::K1(x) => Obj::K1(inv[x]),
        Obj::Bd(x) => Obj::Bd(inv[x]),
        Obj::Open(x) => Obj::Open(inv[x]),
        Obj::Cl(x) => Obj::Cl(inv[x]),
    };
    let arrow = |a: &Arrow| match *a {
        Arrow::I { from, to, parity } => Arrow::I { from: map_subset(from, &inv), to: map_subset(to, &inv), parity },
        Arrow::R { from, to, parity } => Arrow::R { from: map_subset(from, &inv), to: map_subset(to, &inv), parity },
        Arrow::D { from, to, parity } => Arrow::D { from: map_subset(from, &inv), to: map_subset(to, &inv), parity },
        Arrow::Res(x, y) => Arrow::Res(inv[x], inv[y]),
        Arrow::Bd(x, y) => Arrow::Bd(inv[x], inv[y]),
        Arrow::Inc(x, y) => Arrow::Inc(inv[x], inv[y]),
        Arrow::IncBd(x, y) => Arrow::IncBd(inv[x], inv[y]),
        Arrow::U(x) => Arrow::U(inv[x]),
        Arrow::Delta(x) => Arrow::Delta(inv[x]),
    };
    let mut b = ModuleBuilder::new(space, m.kind());
    for (o, g) in m.groups() {
        b.group(obj(o), g.clone());
    }
    for (a, mat) in m.maps() {
        b.map(arrow(a), mat.clone());
    }
    b.build()
}

/// Extends an ST-module on the subspace `sub` of `ambient` to all of
/// `ambient` by `M(Y) = N(Y ∩ sub)`.
pub fn pushforward(n: &Module, ambient: &Arc<FiniteSpace>, sub: Subset) -> Result<Module> {
    if n.kind() != Kind::St {
        return Err(Error::InvalidModule(format!("pushforward expects an ST-module, got {}", n.kind())));
    }
    let (space, pts) = ambient.subspace(sub)?;
    if &space != n.space() {
        return Err(Error::ShapeMismatch("module does not live on the given subspace".into()));
    }
    let mut local = vec![usize::MAX; ambient.len()];
    for (i, &p) in pts.iter().enumerate() {
        local[p] = i;
    }
    let down = |y: Subset| Subset::from_indices(y.inter(sub).iter().map(|p| local[p]));
    let mut b = ModuleBuilder::new(ambient.clone(), Kind::St);
    for o in objects(ambient, Kind::St) {
        let Obj::Lc(y, p) = o else { unreachable!() };
        b.group(o, n.st_group(down(y), p).clone());
    }
    for a in arrows(ambient, Kind::St) {
        let m = match a {
            Arrow::I { from, to, parity } => n.st_i(down(from), down(to), parity),
            Arrow::R { from, to, parity } => n.st_r(down(from), down(to), parity),
            Arrow::D { from, to, parity } => n.st_d(down(from), down(to), parity),
            _ => unreachable!(),
        };
        b.map(a, m.clone());
    }
    b.build()
}
