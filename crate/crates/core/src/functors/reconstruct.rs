//! The functor G from exact B-modules to ST-modules over EBP spaces.
//!
//! Even groups are built from the open stars: a basic open set `up(z)`
//! gets `open z`, any other open set the colimit of its points' opens
//! (glued along common upper bounds), and a non-open set the cokernel of
//! its open boundary. Odd groups are dual: closures, limits of closures
//! glued along common lower bounds, and kernels towards the closed
//! boundary.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::invariants::{is_exact, Arrow, Kind, Module, ModuleBuilder, ModuleMap, Obj};
use crate::space::{FiniteSpace, Subset};
use crate::zmodule::{cokernel, inverse, kernel, lift_through, FgGroup, IntMatrix};

use super::restrict;

/// An ST-module rebuilt from a B-module, together with the auxiliary
/// presentations needed to apply G to maps.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub module: Module,
    base: Module,
    /// Non-basic nonempty closed sets: ambient sum of the point closures
    /// and the inclusion of the odd group into it.
    amb: BTreeMap<Subset, (FgGroup, IntMatrix)>,
    /// Non-closed sets: inclusion of the odd group into that of the
    /// closure.
    cl_incl: BTreeMap<Subset, IntMatrix>,
}

fn violation(what: impl Into<String>) -> Error {
    Error::InternalInvariantViolation(what.into())
}

struct Ctx<'a> {
    n: &'a Module,
    s: &'a FiniteSpace,
    closed_groups: BTreeMap<Subset, FgGroup>,
    amb: BTreeMap<Subset, (FgGroup, IntMatrix)>,
    odd: BTreeMap<Subset, FgGroup>,
    cl_incl: BTreeMap<Subset, IntMatrix>,
}

fn basic_open(s: &FiniteSpace, u: Subset) -> Option<usize> {
    u.iter().find(|&z| s.up(z) == u)
}

fn basic_closed(s: &FiniteSpace, c: Subset) -> Option<usize> {
    c.iter().find(|&z| s.down(z) == c)
}

/// Points indexing the summands for an open set.
fn p_open(s: &FiniteSpace, u: Subset) -> Vec<usize> {
    match basic_open(s, u) {
        Some(z) => vec![z],
        None => u.iter().collect(),
    }
}

fn p_closed(s: &FiniteSpace, c: Subset) -> Vec<usize> {
    match basic_closed(s, c) {
        Some(z) => vec![z],
        None => c.iter().collect(),
    }
}

/// Composite `cl x -> cl y` along the path from `x` down to `y`.
fn res_path(n: &Module, x: usize, y: usize) -> IntMatrix {
    let p = n.space().paths(x, y).into_iter().next().expect("y <= x");
    let mut acc = IntMatrix::identity(n.group(&Obj::Cl(x)).gens());
    for w in p.windows(2) {
        acc = &acc * n.map(&Arrow::Res(w[0], w[1]));
    }
    acc
}

fn open_gens(n: &Module, x: usize) -> usize {
    n.group(&Obj::Open(x)).gens()
}

fn cl_gens(n: &Module, x: usize) -> usize {
    n.group(&Obj::Cl(x)).gens()
}

fn even_gens(n: &Module, u: Subset) -> usize {
    p_open(n.space(), u).into_iter().map(|x| open_gens(n, x)).sum()
}

fn slot_offset(n: &Module, pts: &[usize], x: usize, gens: fn(&Module, usize) -> usize) -> usize {
    pts.iter().take_while(|&&p| p != x).map(|&p| gens(n, p)).sum()
}

/// `open x` into the even group of the open set `w`.
fn basic_to_open(n: &Module, x: usize, w: Subset) -> IntMatrix {
    let s = n.space();
    match basic_open(s, w) {
        Some(z) => n.inclusion_between(x, z),
        None => {
            let pts = p_open(s, w);
            let mut m = IntMatrix::zeros(open_gens(n, x), even_gens(n, w));
            m.paste(0, slot_offset(n, &pts, x, open_gens), &IntMatrix::identity(open_gens(n, x)));
            m
        }
    }
}

/// Even map between open sets `a ⊆ b`.
fn open_incl(n: &Module, a: Subset, b: Subset) -> IntMatrix {
    let blocks: Vec<IntMatrix> = p_open(n.space(), a).into_iter().map(|x| basic_to_open(n, x, b)).collect();
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    IntMatrix::vstack_all(even_gens(n, b), &refs)
}

/// Even group of an open set.
fn open_group(n: &Module, u: Subset) -> FgGroup {
    let s = n.space();
    let pts = p_open(s, u);
    let parts: Vec<&FgGroup> = pts.iter().map(|&x| n.group(&Obj::Open(x))).collect();
    let sum = FgGroup::direct_sum(&parts);
    if basic_open(s, u).is_some() {
        return sum;
    }
    let mut blocks = Vec::new();
    for (i, &x) in pts.iter().enumerate() {
        for &x2 in &pts[i + 1..] {
            for y in s.upper_bounds(x, x2).iter() {
                let a = n.inclusion_between(y, x);
                let b = n.inclusion_between(y, x2);
                let mut block = IntMatrix::zeros(a.rows(), sum.gens());
                block.paste(0, slot_offset(n, &pts, x, open_gens), &a);
                block.paste(0, slot_offset(n, &pts, x2, open_gens), &(-&b));
                blocks.push(block);
            }
        }
    }
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    cokernel(&sum, &IntMatrix::vstack_all(sum.gens(), &refs)).normalized()
}

impl<'a> Ctx<'a> {
    fn new(n: &'a Module) -> Result<Ctx<'a>> {
        let s = n.space();
        let mut ctx =
            Ctx { n, s, closed_groups: BTreeMap::new(), amb: BTreeMap::new(), odd: BTreeMap::new(), cl_incl: BTreeMap::new() };
        for c in s.closed_sets() {
            let g = ctx.closed_group(c);
            ctx.closed_groups.insert(c, g);
        }
        for lc in s.enumerate_lc() {
            let y = lc.set;
            if s.is_closed(y) {
                ctx.odd.insert(y, ctx.closed_groups[&y].clone());
                continue;
            }
            let (cy, by) = (s.closure(y), s.closed_boundary(y));
            let r = ctx.r_closed(cy, by)?;
            let (g, inc) = kernel(&ctx.closed_groups[&cy], &ctx.closed_groups[&by], &r);
            ctx.odd.insert(y, g);
            ctx.cl_incl.insert(y, inc);
        }
        Ok(ctx)
    }

    /// Odd group of a closed set; records the ambient inclusion when the
    /// set is not basic.
    fn closed_group(&mut self, c: Subset) -> FgGroup {
        let (n, s) = (self.n, self.s);
        if c.is_empty() {
            return FgGroup::zero();
        }
        if let Some(z) = basic_closed(s, c) {
            return n.group(&Obj::Cl(z)).clone();
        }
        let pts: Vec<usize> = c.iter().collect();
        let parts: Vec<&FgGroup> = pts.iter().map(|&x| n.group(&Obj::Cl(x))).collect();
        let sum = FgGroup::direct_sum(&parts);
        let mut targets = Vec::new();
        let mut cols = Vec::new();
        for (i, &x) in pts.iter().enumerate() {
            for &x2 in &pts[i + 1..] {
                for w in s.lower_bounds(x, x2).iter() {
                    let mut col = IntMatrix::zeros(sum.gens(), cl_gens(n, w));
                    col.paste(slot_offset(n, &pts, x, cl_gens), 0, &res_path(n, x, w));
                    col.paste(slot_offset(n, &pts, x2, cl_gens), 0, &(-&res_path(n, x2, w)));
                    cols.push(col);
                    targets.push(n.group(&Obj::Cl(w)));
                }
            }
        }
        let tgt = FgGroup::direct_sum(&targets);
        let f = cols.iter().fold(IntMatrix::zeros(sum.gens(), 0), |acc, c| acc.hstack(c));
        let (g, inc) = kernel(&sum, &tgt, &f);
        self.amb.insert(c, (sum, inc));
        g
    }

    fn cl_inc(&self, y: Subset) -> IntMatrix {
        match self.cl_incl.get(&y) {
            Some(m) => m.clone(),
            None => IntMatrix::identity(self.odd[&y].gens()),
        }
    }

    /// Closed-set odd group to the closure of a point `b` in it.
    fn closed_to_basic(&self, d: Subset, b: usize) -> IntMatrix {
        let n = self.n;
        match basic_closed(self.s, d) {
            Some(z) => res_path(n, z, b),
            None => {
                let pts: Vec<usize> = d.iter().collect();
                let off = slot_offset(n, &pts, b, cl_gens);
                self.amb[&d].1.col_range(off, off + cl_gens(n, b))
            }
        }
    }

    /// Lifts a map into `⊕_{b in d} cl b` to the odd group of `d`.
    fn into_closed(&self, d: Subset, h: IntMatrix, what: &str) -> Result<IntMatrix> {
        let (sum, inc) = &self.amb[&d];
        lift_through(sum, inc, &h).ok_or_else(|| violation(format!("{what} does not land in the odd group of {}", self.s.fmt_subset(d))))
    }

    /// Odd restriction between closed sets `d ⊆ c`.
    fn r_closed(&self, c: Subset, d: Subset) -> Result<IntMatrix> {
        let rows = self.closed_groups[&c].gens();
        if d.is_empty() {
            return Ok(IntMatrix::zeros(rows, 0));
        }
        if let Some(z) = basic_closed(self.s, d) {
            return Ok(self.closed_to_basic(c, z));
        }
        let h = d.iter().fold(IntMatrix::zeros(rows, 0), |acc, b| acc.hstack(&self.closed_to_basic(c, b)));
        self.into_closed(d, h, "closed restriction")
    }

    fn lift_odd(&self, y: Subset, h: IntMatrix, what: &str) -> Result<IntMatrix> {
        match self.cl_incl.get(&y) {
            None => Ok(h),
            Some(inc) => lift_through(&self.closed_groups[&self.s.closure(y)], inc, &h)
                .ok_or_else(|| violation(format!("{what} does not land in the odd group of {}", self.s.fmt_subset(y)))),
        }
    }

    fn odd_r(&self, y: Subset, c: Subset) -> Result<IntMatrix> {
        let h = &self.cl_inc(y) * &self.r_closed(self.s.closure(y), self.s.closure(c))?;
        self.lift_odd(c, h, "odd restriction")
    }

    fn odd_i(&self, u: Subset, y: Subset) -> Result<IntMatrix> {
        let (n, s) = (self.n, self.s);
        let rows = self.odd[&u].gens();
        let (cu, cy) = (s.closure(u), s.closure(y));
        let comp = |b: usize| {
            if cu.contains(b) {
                &self.cl_inc(u) * &self.closed_to_basic(cu, b)
            } else {
                IntMatrix::zeros(rows, cl_gens(n, b))
            }
        };
        let h = if cy.is_empty() {
            IntMatrix::zeros(rows, 0)
        } else if let Some(z) = basic_closed(s, cy) {
            comp(z)
        } else {
            let h = cy.iter().fold(IntMatrix::zeros(rows, 0), |acc, b| acc.hstack(&comp(b)));
            self.into_closed(cy, h, "odd inclusion")?
        };
        self.lift_odd(y, h, "odd inclusion")
    }

    fn even_group(&self, y: Subset) -> FgGroup {
        let s = self.s;
        let hull = s.open_hull(y);
        let g = open_group(self.n, hull);
        if s.is_open(y) {
            return g;
        }
        cokernel(&g, &open_incl(self.n, s.open_boundary(y), hull)).normalized()
    }

    fn even_r(&self, y: Subset, c: Subset) -> IntMatrix {
        let (n, s) = (self.n, self.s);
        let (hy, hc) = (s.open_hull(y), s.open_hull(c));
        let cols = even_gens(n, hc);
        let blocks: Vec<IntMatrix> = p_open(s, hy)
            .into_iter()
            .map(|x| if hc.contains(x) { basic_to_open(n, x, hc) } else { IntMatrix::zeros(open_gens(n, x), cols) })
            .collect();
        let refs: Vec<&IntMatrix> = blocks.iter().collect();
        IntMatrix::vstack_all(cols, &refs)
    }
}

/// Applies G to an exact B-module over an EBP space.
pub fn reconstruct(n: &Module) -> Result<Reconstruction> {
    if n.kind() != Kind::B {
        return Err(Error::InvalidModule(format!("reconstruction expects a B-module, got {}", n.kind())));
    }
    let s = n.space();
    let class = s.classify();
    if !class.ebp {
        let why = class.witnesses.first().map(|w| format!("{w:?}")).unwrap_or_default();
        return Err(Error::SpaceNotEBP(why));
    }
    let rep = is_exact(n);
    if !rep.passed {
        return Err(Error::InputNotExact(rep.failure.unwrap_or_default()));
    }
    let ctx = Ctx::new(n)?;
    let mut b = ModuleBuilder::new(n.space_arc().clone(), Kind::St);
    for lc in s.enumerate_lc() {
        let y = lc.set;
        b.group(Obj::Lc(y, 0), ctx.even_group(y));
        b.group(Obj::Lc(y, 1), ctx.odd[&y].clone());
    }
    let mut maps = BTreeMap::new();
    for a in crate::invariants::arrows(s, Kind::St) {
        let m = match a {
            Arrow::I { from, to, parity: 0 } => open_incl(n, s.open_hull(from), s.open_hull(to)),
            Arrow::I { from, to, .. } => ctx.odd_i(from, to)?,
            Arrow::R { from, to, parity: 0 } => ctx.even_r(from, to),
            Arrow::R { from, to, .. } => ctx.odd_r(from, to)?,
            _ => continue,
        };
        maps.insert(a, m);
    }
    let lookup = |a: Arrow| maps.get(&a).ok_or_else(|| violation(format!("missing generator {}", a.key(s))));
    let mut deltas = Vec::new();
    for a in crate::invariants::arrows(s, Kind::St) {
        let Arrow::D { from: c, to: u, parity } = a else { continue };
        let rows = b.get_group(&Obj::Lc(c, parity)).expect("group").gens();
        let cols = b.get_group(&Obj::Lc(u, 1 - parity)).expect("group").gens();
        let mut acc = IntMatrix::zeros(rows, cols);
        if parity == 1 {
            for &(x, y) in s.covers() {
                if !u.contains(x) || !c.contains(y) {
                    continue;
                }
                let (dy, ux) = (s.down(y), s.up(x));
                let term = lookup(Arrow::R { from: c, to: dy.inter(c), parity: 1 })?
                    * lookup(Arrow::I { from: dy.inter(c), to: dy, parity: 1 })?;
                let term = &term * n.map(&Arrow::Bd(x, y));
                let term = &term * lookup(Arrow::R { from: ux, to: ux.inter(u), parity: 0 })?;
                let term = &term * lookup(Arrow::I { from: ux.inter(u), to: u, parity: 0 })?;
                acc = &acc + &term;
            }
        }
        deltas.push((a, acc));
    }
    for (a, m) in maps.into_iter().chain(deltas) {
        b.map(a, m);
    }
    let module = b.build()?;
    Ok(Reconstruction { module, base: n.clone(), amb: ctx.amb, cl_incl: ctx.cl_incl })
}

/// G applied to the B-restriction of an ST-module.
pub fn reconstruct_st(m: &Module) -> Result<Reconstruction> {
    reconstruct(&restrict(m, Kind::B)?)
}

impl Reconstruction {
    /// The B-module this was built from.
    pub fn base(&self) -> &Module {
        &self.base
    }

    /// G applied to a B-map `phi: self.base -> target.base`.
    pub fn map(&self, target: &Reconstruction, phi: &ModuleMap) -> Result<ModuleMap> {
        let s = self.base.space();
        let mut comps = BTreeMap::new();
        for lc in s.enumerate_lc() {
            let y = lc.set;
            if y.is_empty() {
                continue;
            }
            let blocks: Vec<&IntMatrix> =
                p_open(s, s.open_hull(y)).into_iter().map(|x| phi.component(&Obj::Open(x))).collect();
            comps.insert(Obj::Lc(y, 0), IntMatrix::block_diag(&blocks));
        }
        // closed sets first, the rest lift through their closures
        for c in s.closed_sets() {
            if c.is_empty() {
                continue;
            }
            let m = match basic_closed(s, c) {
                Some(z) => phi.component(&Obj::Cl(z)).clone(),
                None => {
                    let blocks: Vec<&IntMatrix> = c.iter().map(|x| phi.component(&Obj::Cl(x))).collect();
                    let h = &self.amb[&c].1 * &IntMatrix::block_diag(&blocks);
                    let (sum, inc) = &target.amb[&c];
                    lift_through(sum, inc, &h).ok_or_else(|| violation("G on maps: closed component"))?
                }
            };
            comps.insert(Obj::Lc(c, 1), m);
        }
        for lc in s.enumerate_lc() {
            let y = lc.set;
            let Some(src) = self.cl_incl.get(&y) else { continue };
            let cy = s.closure(y);
            let h = src * &comps[&Obj::Lc(cy, 1)];
            let cod = target.module.st_group(cy, 1);
            let m = lift_through(cod, &target.cl_incl[&y], &h).ok_or_else(|| violation("G on maps: odd component"))?;
            comps.insert(Obj::Lc(y, 1), m);
        }
        ModuleMap::new(&self.module, &target.module, comps)
    }
}

/// The natural isomorphism `m -> G(restrict(m, B))` for an exact ST-module
/// over an EBP space.
pub fn compute_eta(m: &Module) -> Result<(Reconstruction, ModuleMap)> {
    let g = reconstruct_st(m)?;
    let s = m.space();
    let mut comps = BTreeMap::new();
    for lc in s.enumerate_lc() {
        let y = lc.set;
        if y.is_empty() {
            continue;
        }
        let hull = s.open_hull(y);
        let cols = m.st_group(y, 0).gens();
        let blocks: Vec<IntMatrix> =
            p_open(s, hull).into_iter().map(|x| m.st_i(s.up(x), hull, 0) * m.st_r(hull, y, 0)).collect();
        let refs: Vec<&IntMatrix> = blocks.iter().collect();
        let gy = IntMatrix::vstack_all(cols, &refs);
        let eta = inverse(g.module.st_group(y, 0), m.st_group(y, 0), &gy)
            .ok_or_else(|| violation(format!("even comparison at {} is not invertible", s.fmt_subset(y))))?;
        comps.insert(Obj::Lc(y, 0), eta);

        let cy = s.closure(y);
        let rows = m.st_group(y, 1).gens();
        let to_point = |b: usize| m.st_i(y, cy, 1) * m.st_r(cy, s.down(b), 1);
        let mut f = p_closed(s, cy).into_iter().fold(IntMatrix::zeros(rows, 0), |acc, b| acc.hstack(&to_point(b)));
        if let Some((sum, inc)) = g.amb.get(&cy) {
            f = lift_through(sum, inc, &f).ok_or_else(|| violation("odd comparison: closure"))?;
        }
        if let Some(inc) = g.cl_incl.get(&y) {
            f = lift_through(g.module.st_group(cy, 1), inc, &f).ok_or_else(|| violation("odd comparison: kernel"))?;
        }
        comps.insert(Obj::Lc(y, 1), f);
    }
    let eta = ModuleMap::new(m, &g.module, comps)?;
    if !eta.is_iso(m, &g.module) {
        return Err(violation("comparison map is not an isomorphism"));
    }
    Ok((g, eta))
}
