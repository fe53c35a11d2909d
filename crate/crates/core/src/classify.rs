//! Realizability criteria: the range conditions for graph and
//! Cuntz-Krieger algebras (stable and unital) and the phantom criteria
//! over accordion spaces. Only the criteria are evaluated.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariants::{is_exact, is_rrz, Arrow, Kind, Module, Obj, PointedModule};
use crate::zmodule::{cokernel, kernel, FgGroup, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Outcome of a classification run. Flags not evaluated by the run are
/// `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub checks: Vec<Check>,
    pub graph_realizable: Option<bool>,
    pub ck_realizable: Option<bool>,
    pub unital_graph_realizable: Option<bool>,
    pub unital_ck_realizable: Option<bool>,
    pub phantom_criteria: Option<bool>,
}

impl Verdict {
    fn push(&mut self, id: String, passed: bool, witness: impl FnOnce() -> String) -> bool {
        let witness = if passed { None } else { Some(witness()) };
        self.checks.push(Check { id, passed, witness });
        passed
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// `ck ⟹ graph` and `unital_ck ⟹ unital_graph`.
    pub fn is_monotone(&self) -> bool {
        let imp = |a: Option<bool>, b: Option<bool>| !(a == Some(true) && b != Some(true));
        imp(self.ck_realizable, self.graph_realizable) && imp(self.unital_ck_realizable, self.unital_graph_realizable)
    }
}

fn require(m: &Module, kind: Kind) -> Result<()> {
    if m.kind() != kind {
        return Err(Error::InvalidModule(format!("expected a {kind}-module, got {}", m.kind())));
    }
    Ok(())
}

/// Rank of `coker(u: bd x -> open x)`.
fn open_coker_rank(m: &Module, x: usize) -> usize {
    cokernel(m.group(&Obj::Open(x)), m.map(&Arrow::U(x))).rank()
}

fn graph_checks(m: &Module, v: &mut Verdict) -> bool {
    let s = m.space();
    let rep = is_exact(m);
    let mut ok = v.push("r.exact".into(), rep.passed, || rep.failure.clone().unwrap_or_default());
    for x in 0..s.len() {
        let k1 = m.group(&Obj::K1(x));
        ok &= v.push(format!("r.free.{}", s.name(x)), k1.is_free(), || format!("k1:{} is {}", s.name(x), k1.describe()));
    }
    v.graph_realizable = Some(ok);
    ok
}

/// Graph-algebra range criterion: exact, with free `k1` groups.
pub fn range_check_graph(m: &Module) -> Result<Verdict> {
    require(m, Kind::R)?;
    let mut v = Verdict::default();
    graph_checks(m, &mut v);
    Ok(v)
}

fn rank_checks(m: &Module, v: &mut Verdict, id: &str, cmp: fn(usize, usize) -> bool, rel: &str) -> bool {
    let s = m.space();
    let mut ok = true;
    for x in 0..s.len() {
        let (a, b) = (m.group(&Obj::K1(x)).rank(), open_coker_rank(m, x));
        ok &= v.push(format!("{id}.{}", s.name(x)), cmp(a, b), || {
            format!("rank k1:{0} = {a}, rank coker(bd:{0} -> open:{0}) = {b}, expected {rel}", s.name(x))
        });
    }
    ok
}

fn fg_checks(m: &Module, v: &mut Verdict) {
    for x in 0..m.space().len() {
        v.push(format!("r.fg.{}", m.space().name(x)), true, String::new);
    }
}

/// Cuntz-Krieger range criterion: the graph criterion plus
/// `rank k1 x = rank coker(bd x -> open x)` at every point.
pub fn range_check_ck(m: &Module) -> Result<Verdict> {
    require(m, Kind::R)?;
    let mut v = Verdict::default();
    let graph = graph_checks(m, &mut v);
    fg_checks(m, &mut v);
    let ranks = rank_checks(m, &mut v, "ck.rank", |a, b| a == b, "equality");
    v.ck_realizable = Some(graph && ranks);
    Ok(v)
}

/// Unital range criteria: `rank k1 x <= rank coker` for graphs, equality
/// for Cuntz-Krieger algebras. The unit is not constrained.
pub fn range_check_unital(p: &PointedModule) -> Result<Verdict> {
    let m = &p.module;
    require(m, Kind::R)?;
    let mut v = Verdict::default();
    let graph = graph_checks(m, &mut v);
    fg_checks(m, &mut v);
    v.push("unital.unit".into(), true, String::new);
    let le = rank_checks(m, &mut v, "unital.rank.le", |a, b| a <= b, "at most");
    let eq = rank_checks(m, &mut v, "ck.rank", |a, b| a == b, "equality");
    v.ck_realizable = Some(graph && eq);
    v.unital_graph_realizable = Some(graph && le);
    v.unital_ck_realizable = Some(graph && le && eq);
    Ok(v)
}

/// Odd and even groups of the point `{x}` as seen by a B-module:
/// `ker(cl x -> ⊕_{x->y} cl y)` and `coker(⊕_{y->x} open y -> open x)`.
pub fn b_point_groups(m: &Module, x: usize) -> (FgGroup, FgGroup) {
    let s = m.space();
    let cl = m.group(&Obj::Cl(x));
    let ys: Vec<usize> = s.cover_children(x).iter().collect();
    let parts: Vec<&FgGroup> = ys.iter().map(|&y| m.group(&Obj::Cl(y))).collect();
    let r = ys.iter().fold(IntMatrix::zeros(cl.gens(), 0), |acc, &y| acc.hstack(m.map(&Arrow::Res(x, y))));
    let (odd, _) = kernel(cl, &FgGroup::direct_sum(&parts), &r);
    let open = m.group(&Obj::Open(x));
    let incs: Vec<&IntMatrix> = s.cover_parents(x).iter().map(|z| m.map(&Arrow::Inc(z, x))).collect();
    let even = cokernel(open, &IntMatrix::vstack_all(open.gens(), &incs));
    (odd, even)
}

/// Phantom criteria over an accordion space, for a pointed ST- or
/// B-module: at every point the odd group is free and has the rank of the
/// even group.
pub fn phantom_verdict(p: &PointedModule) -> Result<Verdict> {
    let m = &p.module;
    let s = m.space();
    let class = s.classify();
    if !class.accordion {
        let why = class.witnesses.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join("; ");
        return Err(Error::NotApplicable(format!("space is not an accordion space: {why}")));
    }
    let mut v = Verdict::default();
    v.push("phantom.accordion".into(), true, String::new);
    let mut ok = match m.kind() {
        Kind::St => {
            let rep = is_exact(m);
            let a = v.push("st.exact".into(), rep.passed, || rep.failure.clone().unwrap_or_default());
            let b = v.push("st.rrz".into(), is_rrz(m), || "an even-to-odd boundary map is nonzero".into());
            a && b
        }
        Kind::B => {
            let rep = is_exact(m);
            v.push("b.exact".into(), rep.passed, || rep.failure.clone().unwrap_or_default())
        }
        k => return Err(Error::InvalidModule(format!("phantom criteria take ST- or B-modules, got {k}"))),
    };
    for x in 0..s.len() {
        let name = s.name(x);
        let (odd, even) = match m.kind() {
            Kind::St => {
                let pt = crate::space::Subset::singleton(x);
                (m.st_group(pt, 1).clone(), m.st_group(pt, 0).clone())
            }
            _ => b_point_groups(m, x),
        };
        ok &= v.push(format!("phantom.free.{name}"), odd.is_free(), || format!("K1 at {name} is {}", odd.describe()));
        v.push(format!("phantom.fg.{name}"), true, String::new);
        let (a, b) = (odd.rank(), even.rank());
        ok &= v.push(format!("phantom.rank.{name}"), a == b, || format!("rank K1 = {a}, rank K0 = {b} at {name}"));
    }
    v.phantom_criteria = Some(ok);
    Ok(v)
}
