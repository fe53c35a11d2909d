use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::invariants::{Arrow, Kind, Module, ModuleMap, Obj};
use crate::space::FiniteSpace;
use crate::zmodule::{free_complement, preimage_rows, IntMatrix};

use super::{bd_summands, compute_eta, restrict, restrict_map, tb_to_b_map, tb_to_r};

/// An R-map between ST restrictions, transported to the R-modules of the
/// TB restrictions (boundaries as sums of cover-parent opens).
pub fn r_map_to_tb_r(phi: &ModuleMap, s: &FiniteSpace) -> ModuleMap {
    let mut comps = BTreeMap::new();
    for x in 0..s.len() {
        comps.insert(Obj::K1(x), phi.component(&Obj::K1(x)).clone());
        comps.insert(Obj::Open(x), phi.component(&Obj::Open(x)).clone());
        let blocks: Vec<&IntMatrix> = bd_summands(s, x).into_iter().map(|y| phi.component(&Obj::Open(y))).collect();
        comps.insert(Obj::Bd(x), IntMatrix::block_diag(&blocks));
    }
    ModuleMap::raw(Kind::R, comps)
}

/// Extends an R-map `psi: tb_to_r(m) -> tb_to_r(n)` to a TB-map `m -> n`.
///
/// The `k1` and `open` components are kept. On `cl w` the map is fixed on
/// `u(k1 w)` and chosen on a free complement so that it agrees with the
/// already built components below `w` and with the opens above.
pub fn lift_r_morphism(m: &Module, n: &Module, psi: &ModuleMap) -> Result<ModuleMap> {
    if m.kind() != Kind::Tb || n.kind() != Kind::Tb {
        return Err(Error::InvalidModule("lifting expects TB-modules".into()));
    }
    let s = m.space();
    let psi = ModuleMap::new(&tb_to_r(m)?, &tb_to_r(n)?, psi.components().clone())?;
    let mut comps: BTreeMap<Obj, IntMatrix> = BTreeMap::new();
    for x in 0..s.len() {
        comps.insert(Obj::K1(x), psi.component(&Obj::K1(x)).clone());
        comps.insert(Obj::Open(x), psi.component(&Obj::Open(x)).clone());
    }
    for w in s.ascending() {
        let name = s.name(w);
        let cl_m = m.group(&Obj::Cl(w));
        let u_m = m.map(&Arrow::U(w));
        let v = free_complement(cl_m, u_m).map_err(|e| Error::FreenessHypothesisFailed(format!("cl:{name}: {e}")))?;

        let (_, f_m, _) = crate::invariants::b_sequence(m, w);
        let (mid_n, f_n, _) = crate::invariants::b_sequence(n, w);
        let mut blocks: Vec<&IntMatrix> = s.cover_children(w).iter().map(|y| &comps[&Obj::Cl(y)]).collect();
        blocks.extend(s.cover_parents(w).iter().map(|z| &comps[&Obj::Open(z)]));
        let big = IntMatrix::block_diag(&blocks);
        let target = &(&v * &f_m) * &big;
        let x = preimage_rows(&mid_n, &f_n, &target)
            .ok_or_else(|| Error::InternalInvariantViolation(format!("no lift on the complement at cl:{name}")))?;

        let gens = v.vstack(u_m);
        let coeffs = preimage_rows(cl_m, &gens, &IntMatrix::identity(cl_m.gens()))
            .ok_or_else(|| Error::InternalInvariantViolation(format!("cl:{name} is not spanned by complement and k1")))?;
        let (a, b) = (coeffs.col_range(0, v.rows()), coeffs.col_range(v.rows(), gens.rows()));
        let on_k1 = &comps[&Obj::K1(w)] * n.map(&Arrow::U(w));
        comps.insert(Obj::Cl(w), &(&a * &x) + &(&b * &on_k1));
    }
    ModuleMap::new(m, n, comps)
}

/// Lifts an R-map between the R-restrictions of two exact ST-modules over
/// an EBP space to an ST-map restricting to it.
pub fn lift_to_st(m: &Module, n: &Module, phi: &ModuleMap) -> Result<ModuleMap> {
    if m.kind() != Kind::St || n.kind() != Kind::St {
        return Err(Error::InvalidModule("lifting expects ST-modules".into()));
    }
    let s = m.space();
    let (mr, nr) = (restrict(m, Kind::R)?, restrict(n, Kind::R)?);
    let phi = ModuleMap::new(&mr, &nr, phi.components().clone())?;
    let (gm, eta_m) = compute_eta(m)?;
    let (gn, eta_n) = compute_eta(n)?;
    let (mt, nt) = (restrict(m, Kind::Tb)?, restrict(n, Kind::Tb)?);
    let lifted = lift_r_morphism(&mt, &nt, &r_map_to_tb_r(&phi, s))?;
    let on_b = tb_to_b_map(&lifted, s);
    let g_phi = gm.map(&gn, &ModuleMap::new(gm.base(), gn.base(), on_b.components().clone())?)?;
    let back = eta_n
        .inverse(n, &gn.module)
        .ok_or_else(|| Error::InternalInvariantViolation("comparison map is not invertible".into()))?;
    let total = eta_m.then(&g_phi).then(&back);
    let total = ModuleMap::new(m, n, total.components().clone())?;
    if !restrict_map(&total, s, Kind::R).equals(&phi, &nr) {
        return Err(Error::InternalInvariantViolation("lift does not restrict to the given map".into()));
    }
    Ok(total)
}
