use num_traits::Zero;

use crate::space::Subset;
use crate::zmodule::{exact_at, is_injective, is_surjective, FgGroup, IntMatrix};

use super::{st_pairs, Arrow, Kind, Module, Obj, Report};

/// Exactness of every defining sequence of the module's kind.
pub fn is_exact(m: &Module) -> Report {
    let mut rep = Report::new("exactness");
    match m.kind() {
        Kind::St => st_exact(m, &mut rep),
        Kind::B => b_exact(m, &mut rep),
        Kind::Tb => {
            b_exact(m, &mut rep);
            tb_exact(m, &mut rep);
        }
        Kind::R => r_exact(m, &mut rep),
    }
    rep
}

/// Whether every even-to-odd boundary map vanishes.
pub fn is_rrz(m: &Module) -> bool {
    assert_eq!(m.kind(), Kind::St, "rrz is a property of ST-modules");
    m.maps().iter().all(|(a, mat)| match a {
        Arrow::D { parity: 0, .. } => mat.is_zero() || m.target(a).rows_are_zero(mat),
        _ => true,
    })
}

/// Position (0 to 5) of the first failure of the six-term sequence of
/// `U ⊆ Y`, starting at `M(U,0)`.
pub fn six_term_exact_at(m: &Module, y: Subset, u: Subset) -> Option<usize> {
    let c = y.minus(u);
    let objs = [(u, 0u8), (y, 0), (c, 0), (u, 1), (y, 1), (c, 1)];
    let maps = [
        m.st_i(u, y, 0),
        m.st_r(y, c, 0),
        m.st_d(c, u, 0),
        m.st_i(u, y, 1),
        m.st_r(y, c, 1),
        m.st_d(c, u, 1),
    ];
    // position k is the group objs[k], between maps[k-1] and maps[k]
    (0..6).find(|&k| {
        let (mid, p) = objs[k];
        let (next, q) = objs[(k + 1) % 6];
        !exact_at(m.st_group(mid, p), m.st_group(next, q), maps[(k + 5) % 6], maps[k])
    })
}

fn st_exact(m: &Module, rep: &mut Report) {
    let s = m.space();
    for (y, u) in st_pairs(s) {
        let c = y.minus(u);
        if u.is_empty() || c.is_empty() {
            continue;
        }
        let bad = six_term_exact_at(m, y, u);
        let ok = rep.record(bad.is_none(), || {
            format!("six-term sequence of {} in {} not exact at position {}", s.fmt_subset(u), s.fmt_subset(y), bad.unwrap())
        });
        if !ok {
            return;
        }
    }
}

/// The B sequence at `x`: `cl x -> ⊕_{x->y} cl y ⊕ ⊕_{z->x} open z -> open x`.
pub(crate) fn b_sequence(m: &Module, x: usize) -> (FgGroup, IntMatrix, IntMatrix) {
    let s = m.space();
    let ys: Vec<usize> = s.cover_children(x).iter().collect();
    let zs: Vec<usize> = s.cover_parents(x).iter().collect();
    let mut parts: Vec<&FgGroup> = ys.iter().map(|&y| m.group(&Obj::Cl(y))).collect();
    parts.extend(zs.iter().map(|&z| m.group(&Obj::Open(z))));
    let mid = FgGroup::direct_sum(&parts);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for &y in &ys {
        left.push(m.map(&Arrow::Res(x, y)).clone());
        right.push(m.map(&Arrow::Bd(x, y)).clone());
    }
    for &z in &zs {
        left.push(-m.map(&Arrow::Bd(z, x)));
        right.push(m.map(&Arrow::Inc(z, x)).clone());
    }
    let rows = m.group(&Obj::Cl(x)).gens();
    let cols = m.group(&Obj::Open(x)).gens();
    let f = left.iter().fold(IntMatrix::zeros(rows, 0), |acc, b| acc.hstack(b));
    let refs: Vec<&IntMatrix> = right.iter().collect();
    let g = IntMatrix::vstack_all(cols, &refs);
    (mid, f, g)
}

fn b_exact(m: &Module, rep: &mut Report) {
    let s = m.space();
    for x in 0..s.len() {
        let (mid, f, g) = b_sequence(m, x);
        let ok = exact_at(&mid, m.group(&Obj::Open(x)), &f, &g);
        if !rep.record(ok, || format!("B sequence at {} not exact", s.name(x))) {
            return;
        }
    }
}

fn tb_exact(m: &Module, rep: &mut Report) {
    let s = m.space();
    for x in 0..s.len() {
        let k1 = m.group(&Obj::K1(x));
        let cl = m.group(&Obj::Cl(x));
        let u = m.map(&Arrow::U(x));
        if !rep.record(is_injective(k1, cl, u), || format!("u:{} not injective", s.name(x))) {
            return;
        }
        let ys: Vec<usize> = s.cover_children(x).iter().collect();
        let parts: Vec<&FgGroup> = ys.iter().map(|&y| m.group(&Obj::Cl(y))).collect();
        let sum = FgGroup::direct_sum(&parts);
        let r = ys.iter().fold(IntMatrix::zeros(cl.gens(), 0), |acc, &y| acc.hstack(m.map(&Arrow::Res(x, y))));
        if !rep.record(exact_at(cl, &sum, u, &r), || format!("sequence at cl:{} not exact", s.name(x))) {
            return;
        }
    }
}

/// The assembled map `⊕_{y->x} open y -> bd x` in R, with the summands'
/// order (cover parents of `x` by index).
pub fn r_boundary_assembly(m: &Module, x: usize) -> (FgGroup, IntMatrix) {
    let s = m.space();
    let ys: Vec<usize> = s.cover_parents(x).iter().collect();
    let parts: Vec<&FgGroup> = ys.iter().map(|&y| m.group(&Obj::Open(y))).collect();
    let refs: Vec<&IntMatrix> = ys.iter().map(|&y| m.map(&Arrow::IncBd(y, x))).collect();
    let cols = m.group(&Obj::Bd(x)).gens();
    (FgGroup::direct_sum(&parts), IntMatrix::vstack_all(cols, &refs))
}

fn r_exact(m: &Module, rep: &mut Report) {
    let s = m.space();
    for x in 0..s.len() {
        let bd = m.group(&Obj::Bd(x));
        let ok = exact_at(bd, m.group(&Obj::Open(x)), m.map(&Arrow::Delta(x)), m.map(&Arrow::U(x)));
        if !rep.record(ok, || format!("k1:{0} -> bd:{0} -> open:{0} not exact", s.name(x))) {
            return;
        }
        let ys: Vec<usize> = s.cover_parents(x).iter().collect();
        let (sum, g) = r_boundary_assembly(m, x);
        if !rep.record(is_surjective(bd, &g), || format!("boundary assembly onto bd:{} not surjective", s.name(x))) {
            return;
        }
        // double-path relations into ⊕_{y->x} open y
        let offsets: Vec<usize> = ys
            .iter()
            .scan(0, |acc, &y| {
                let o = *acc;
                *acc += m.group(&Obj::Open(y)).gens();
                Some(o)
            })
            .collect();
        let slot = |y: usize| offsets[ys.iter().position(|&t| t == y).expect("cover parent")];
        let mut rows: Vec<IntMatrix> = Vec::new();
        for (p, q) in s.double_paths(x) {
            let src = m.group(&Obj::Open(p[0])).gens();
            let mut block = IntMatrix::zeros(src, sum.gens());
            for (path, sign) in [(&p, 1i64), (&q, -1i64)] {
                let n = path.len();
                let inc = m.path_inclusion(&path[..n - 1]);
                let o = slot(path[n - 2]);
                for i in 0..inc.rows() {
                    for j in 0..inc.cols() {
                        let v = inc.get(i, j);
                        if !v.is_zero() {
                            let cur = block.get(i, o + j).clone();
                            block.set(i, o + j, cur + v * sign);
                        }
                    }
                }
            }
            rows.push(block);
        }
        let refs: Vec<&IntMatrix> = rows.iter().collect();
        let f = IntMatrix::vstack_all(sum.gens(), &refs);
        if !rep.record(exact_at(&sum, bd, &f, &g), || format!("presentation of bd:{} not exact", s.name(x))) {
            return;
        }
    }
}

/// Exactness of `⊕_{i<j} M(U_i ∩ U_j,0) -> ⊕_i M(U_i,0) -> M(Y,0) -> 0`
/// for an open covering `cover` of the open set `y`.
pub fn cover_sequence_exact(m: &Module, y: Subset, cover: &[Subset]) -> bool {
    let parts: Vec<&FgGroup> = cover.iter().map(|&u| m.st_group(u, 0)).collect();
    let sum = FgGroup::direct_sum(&parts);
    let mut offsets = Vec::with_capacity(cover.len());
    let mut acc = 0;
    for p in &parts {
        offsets.push(acc);
        acc += p.gens();
    }
    let mut rows = Vec::new();
    for i in 0..cover.len() {
        for j in i + 1..cover.len() {
            let w = cover[i].inter(cover[j]);
            let mut block = IntMatrix::zeros(m.st_group(w, 0).gens(), sum.gens());
            block.paste(0, offsets[i], m.st_i(w, cover[i], 0));
            block.paste(0, offsets[j], &(-m.st_i(w, cover[j], 0)));
            rows.push(block);
        }
    }
    let refs: Vec<&IntMatrix> = rows.iter().collect();
    let f = IntMatrix::vstack_all(sum.gens(), &refs);
    let g_parts: Vec<&IntMatrix> = cover.iter().map(|&u| m.st_i(u, y, 0)).collect();
    let g = IntMatrix::vstack_all(m.st_group(y, 0).gens(), &g_parts);
    exact_at(&sum, m.st_group(y, 0), &f, &g) && is_surjective(m.st_group(y, 0), &g)
}
