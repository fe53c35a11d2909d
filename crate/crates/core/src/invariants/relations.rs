use std::collections::{BTreeMap, HashSet};

use crate::space::{FiniteSpace, Subset};
use crate::zmodule::{maps_equal, IntMatrix};

use super::{Arrow, Kind, Module, Obj, Report};

/// Checks every defining relation of the module's kind and reports the first
/// violated instance.
pub fn validate_module(m: &Module) -> Report {
    let mut rep = Report::new("relations");
    match m.kind() {
        Kind::St => st_relations(m, &mut rep),
        Kind::B => b_relations(m, &mut rep),
        Kind::Tb => {
            b_relations(m, &mut rep);
            tb_extra(m, &mut rep);
        }
        Kind::R => r_relations(m, &mut rep),
    }
    rep
}

fn eq(m: &Module, cod: Obj, a: &IntMatrix, b: &IntMatrix) -> bool {
    maps_equal(m.group(&cod), a, b)
}

/// The B relation at `x`: `Σ_{x->y} r·δ = Σ_{z->x} δ·i` on `cl x -> open x`.
pub(crate) fn b_relation_holds(m: &Module, x: usize) -> bool {
    let s = m.space();
    let rows = m.group(&Obj::Cl(x)).gens();
    let cols = m.group(&Obj::Open(x)).gens();
    let mut lhs = IntMatrix::zeros(rows, cols);
    for y in s.cover_children(x).iter() {
        lhs = &lhs + &(m.map(&Arrow::Res(x, y)) * m.map(&Arrow::Bd(x, y)));
    }
    let mut rhs = IntMatrix::zeros(rows, cols);
    for z in s.cover_parents(x).iter() {
        rhs = &rhs + &(m.map(&Arrow::Bd(z, x)) * m.map(&Arrow::Inc(z, x)));
    }
    eq(m, Obj::Open(x), &lhs, &rhs)
}

fn b_relations(m: &Module, rep: &mut Report) {
    for x in 0..m.space().len() {
        if !rep.record(b_relation_holds(m, x), || format!("B relation at {}", m.space().name(x))) {
            return;
        }
    }
}

fn tb_extra(m: &Module, rep: &mut Report) {
    let s = m.space();
    for &(x, y) in s.covers() {
        let c = m.map(&Arrow::U(x)) * m.map(&Arrow::Res(x, y));
        let ok = m.group(&Obj::Cl(y)).rows_are_zero(&c);
        if !rep.record(ok, || format!("u:{} r:{}>{} is not zero", s.name(x), s.name(x), s.name(y))) {
            return;
        }
    }
}

fn r_relations(m: &Module, rep: &mut Report) {
    let s = m.space();
    for x in 0..s.len() {
        let c = m.map(&Arrow::Delta(x)) * m.map(&Arrow::U(x));
        if !rep.record(m.group(&Obj::Open(x)).rows_are_zero(&c), || format!("d:{0} u:{0} is not zero", s.name(x))) {
            return;
        }
    }
    for x in 0..s.len() {
        for y in s.up(x).without(x).iter() {
            let paths = s.paths(y, x);
            if paths.len() < 2 {
                continue;
            }
            let via = |p: &[usize]| {
                let n = p.len();
                &m.path_inclusion(&p[..n - 1]) * m.map(&Arrow::IncBd(p[n - 2], x))
            };
            let first = via(&paths[0]);
            for q in &paths[1..] {
                let ok = eq(m, Obj::Bd(x), &first, &via(q));
                if !rep.record(ok, || format!("paths {} and {} disagree", s.fmt_path(&paths[0]), s.fmt_path(q))) {
                    return;
                }
            }
        }
    }
}

/// Relatively open subsets of `y`, by mask.
pub(crate) fn rel_opens(s: &FiniteSpace, y: Subset) -> Vec<Subset> {
    y.subsets().filter(|&u| s.is_open_in(u, y)).collect()
}

pub(crate) fn rel_closeds(s: &FiniteSpace, y: Subset) -> Vec<Subset> {
    y.subsets().filter(|&c| s.is_closed_in(c, y)).collect()
}

fn st_relations(m: &Module, rep: &mut Report) {
    let s = m.space();
    let lcs: Vec<Subset> = s.enumerate_lc().into_iter().map(|l| l.set).collect();
    let f = |y: Subset| s.fmt_subset(y);
    let trivial = |y: Subset, p: u8| m.st_group(y, p).gens() == 0;

    macro_rules! check {
        ($ok:expr, $msg:expr) => {
            if !rep.record($ok, || $msg) {
                return;
            }
        };
    }

    for &y in &lcs {
        let opens = rel_opens(s, y);
        let closeds = rel_closeds(s, y);
        for p in [0u8, 1] {
            if trivial(y, p) {
                continue;
            }
            let id = IntMatrix::identity(m.st_group(y, p).gens());
            // (1)
            check!(eq(m, Obj::Lc(y, p), m.st_i(y, y, p), &id), format!("(1) i at {} parity {p}", f(y)));
            check!(eq(m, Obj::Lc(y, p), m.st_r(y, y, p), &id), format!("(1) r at {} parity {p}", f(y)));
            // (2)
            for &a in &opens {
                let b = y.minus(a);
                if a.is_empty() || b.is_empty() || a > b || !s.is_closed_in(a, y) {
                    continue;
                }
                let sum = &(m.st_r(y, a, p) * m.st_i(a, y, p)) + &(m.st_r(y, b, p) * m.st_i(b, y, p));
                check!(eq(m, Obj::Lc(y, p), &sum, &id), format!("(2) {} = {} + {} parity {p}", f(y), f(a), f(b)));
            }
        }
        // (3)
        for &u in &opens {
            for &v in &opens {
                if u == v || v == y || !u.is_subset(v) {
                    continue;
                }
                for p in [0u8, 1] {
                    if trivial(u, p) || trivial(y, p) {
                        continue;
                    }
                    let lhs = m.st_i(u, v, p) * m.st_i(v, y, p);
                    check!(
                        eq(m, Obj::Lc(y, p), &lhs, m.st_i(u, y, p)),
                        format!("(3) {} in {} in {} parity {p}", f(u), f(v), f(y))
                    );
                }
            }
        }
        // (4)
        for &c in &closeds {
            for &d in &closeds {
                if c == d || d == y || !c.is_subset(d) {
                    continue;
                }
                for p in [0u8, 1] {
                    if trivial(c, p) || trivial(y, p) {
                        continue;
                    }
                    let lhs = m.st_r(y, d, p) * m.st_r(d, c, p);
                    check!(
                        eq(m, Obj::Lc(c, p), &lhs, m.st_r(y, c, p)),
                        format!("(4) {} in {} in {} parity {p}", f(c), f(d), f(y))
                    );
                }
            }
        }
        // (5)
        for &u in &opens {
            for &c in &closeds {
                let uc = u.inter(c);
                for p in [0u8, 1] {
                    if trivial(u, p) || trivial(c, p) {
                        continue;
                    }
                    let lhs = m.st_i(u, y, p) * m.st_r(y, c, p);
                    let rhs = m.st_r(u, uc, p) * m.st_i(uc, c, p);
                    check!(
                        eq(m, Obj::Lc(c, p), &lhs, &rhs),
                        format!("(5) U = {}, C = {} in {} parity {p}", f(u), f(c), f(y))
                    );
                }
            }
        }
        // (6) and (7)
        for &u in &opens {
            let c = y.minus(u);
            for p in [0u8, 1] {
                let q = 1 - p;
                for c2 in rel_opens(s, c) {
                    if c2 == c || trivial(c2, p) || trivial(u, q) {
                        continue;
                    }
                    let lhs = m.st_i(c2, c, p) * m.st_d(c, u, p);
                    check!(
                        eq(m, Obj::Lc(u, q), &lhs, m.st_d(c2, u, p)),
                        format!("(6) ({}, {}) with C' = {} parity {p}", f(u), f(c), f(c2))
                    );
                }
                for u2 in rel_closeds(s, u) {
                    if u2 == u || trivial(c, p) || trivial(u2, q) {
                        continue;
                    }
                    let lhs = m.st_d(c, u, p) * m.st_r(u, u2, q);
                    check!(
                        eq(m, Obj::Lc(u2, q), &lhs, m.st_d(c, u2, p)),
                        format!("(7) ({}, {}) with U' = {} parity {p}", f(u), f(c), f(u2))
                    );
                }
            }
        }
    }

    // (8)
    for (y, z, wy, wz) in relation8_instances(s, &lcs) {
        for p in [0u8, 1] {
            let q = 1 - p;
            if trivial(y, p) || trivial(z, q) {
                continue;
            }
            let lhs = m.st_d(y, wy, p) * m.st_i(wy, z, q);
            let rhs = m.st_r(y, wz, p) * m.st_d(wz, z, p);
            check!(
                eq(m, Obj::Lc(z, q), &lhs, &rhs),
                format!("(8) Y = {}, Z = {}, W\\Y = {}, W\\Z = {} parity {p}", f(y), f(z), f(wy), f(wz))
            );
        }
    }
}

/// Tuples `(Y, Z, W∖Y, W∖Z)` over all `W` meeting the side conditions of
/// the mixed δ relation, deduplicated.
pub(crate) fn relation8_instances(s: &FiniteSpace, lcs: &[Subset]) -> Vec<(Subset, Subset, Subset, Subset)> {
    let is_lc = |a: Subset| s.is_locally_closed(a);
    let mut by_w_closed: BTreeMap<Subset, Vec<Subset>> = BTreeMap::new();
    let mut by_w_open: BTreeMap<Subset, Vec<Subset>> = BTreeMap::new();
    for &w in lcs {
        for &a in lcs {
            let u = a.union(w);
            if !is_lc(u) {
                continue;
            }
            if s.is_closed_in(a, u) && s.is_closed_in(w, u) {
                by_w_closed.entry(w).or_default().push(a);
            }
            if s.is_open_in(a, u) && s.is_open_in(w, u) {
                by_w_open.entry(w).or_default().push(a);
            }
        }
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for (w, ys) in &by_w_closed {
        let Some(zs) = by_w_open.get(w) else { continue };
        for &y in ys {
            for &z in zs {
                if !w.is_subset(y.union(z)) {
                    continue;
                }
                let t = (y, z, w.minus(y), w.minus(z));
                if seen.insert(t) {
                    out.push(t);
                }
            }
        }
    }
    out
}
