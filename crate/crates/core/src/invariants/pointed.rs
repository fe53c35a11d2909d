use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::zmodule::{cokernel, FgGroup, IntMatrix};

use super::{Kind, Module, ModuleMap, Obj};

/// The group receiving units, presented as a quotient of `sum`.
///
/// For ST this is `M(X,0)` itself. For the point-indexed kinds it is the
/// cokernel of the upper-bound relation map into `⊕_x M(open x)`.
#[derive(Clone, Debug)]
pub struct Receptacle {
    pub sum: FgGroup,
    /// Relation rows into `sum` (empty for ST).
    pub relations: IntMatrix,
    /// `sum` modulo `relations`, on the same generators.
    pub group: FgGroup,
    /// Start of the `open x` block in `sum`, per point (empty for ST).
    pub offsets: Vec<usize>,
}

/// The upper-bound relation map `⊕ M(open y) -> ⊕_x M(open x)`, one row
/// block per triple `(x, x', y)` with `x < x'` by index and `y` a common
/// upper bound, sending `m` to `(m·i_{y,x}, -m·i_{y,x'})`.
pub fn upper_bound_relations(m: &Module, offsets: &[usize], total: usize) -> IntMatrix {
    let s = m.space();
    let mut blocks = Vec::new();
    for x in 0..s.len() {
        for x2 in x + 1..s.len() {
            for y in s.upper_bounds(x, x2).iter() {
                let a = m.inclusion_between(y, x);
                let b = m.inclusion_between(y, x2);
                let mut block = IntMatrix::zeros(a.rows(), total);
                block.paste(0, offsets[x], &a);
                block.paste(0, offsets[x2], &(-&b));
                blocks.push(block);
            }
        }
    }
    let refs: Vec<&IntMatrix> = blocks.iter().collect();
    IntMatrix::vstack_all(total, &refs)
}

pub fn unit_receptacle(m: &Module) -> Result<Receptacle> {
    let s = m.space();
    if m.kind() == Kind::St {
        let g = m.st_group(s.all(), 0).clone();
        return Ok(Receptacle {
            relations: IntMatrix::zeros(0, g.gens()),
            sum: g.clone(),
            group: g,
            offsets: Vec::new(),
        });
    }
    if m.kind() != Kind::R && !s.is_unique_path() {
        return Err(Error::SpaceNotUniquePath("unit receptacle needs unique inclusions".into()));
    }
    let parts: Vec<&FgGroup> = (0..s.len()).map(|x| m.group(&Obj::Open(x))).collect();
    let sum = FgGroup::direct_sum(&parts);
    let offsets = block_offsets(&parts);
    let relations = upper_bound_relations(m, &offsets, sum.gens());
    let group = cokernel(&sum, &relations);
    Ok(Receptacle { sum, relations, group, offsets })
}

pub(crate) fn block_offsets(parts: &[&FgGroup]) -> Vec<usize> {
    let mut out = Vec::with_capacity(parts.len());
    let mut acc = 0;
    for p in parts {
        out.push(acc);
        acc += p.gens();
    }
    out
}

/// A module together with a unit representative in its receptacle.
#[derive(Clone, Debug, PartialEq)]
pub struct PointedModule {
    pub module: Module,
    pub unit: Vec<BigInt>,
}

impl PointedModule {
    pub fn new(module: Module, unit: Vec<BigInt>) -> Result<PointedModule> {
        let rec = unit_receptacle(&module)?;
        if unit.len() != rec.sum.gens() {
            return Err(Error::ShapeMismatch(format!(
                "unit has {} entries, receptacle has {} generators",
                unit.len(),
                rec.sum.gens()
            )));
        }
        Ok(PointedModule { module, unit })
    }
}

/// Matrix of the map induced by `f` on `⊕_x M(open x)` (or on `M(X,0)`).
pub(crate) fn receptacle_matrix(f: &ModuleMap, src: &Module) -> IntMatrix {
    let s = src.space();
    if src.kind() == Kind::St {
        return f.component(&Obj::Lc(s.all(), 0)).clone();
    }
    let blocks: Vec<&IntMatrix> = (0..s.len()).map(|x| f.component(&Obj::Open(x))).collect();
    IntMatrix::block_diag(&blocks)
}

/// Whether `f` carries the unit class of `m` to the unit class of `n`.
pub fn check_pointed_map(f: &ModuleMap, m: &PointedModule, n: &PointedModule) -> Result<bool> {
    let rec = unit_receptacle(&n.module)?;
    let image = &IntMatrix::row_vector(m.unit.clone()) * &receptacle_matrix(f, &m.module);
    let diff = &image - &IntMatrix::row_vector(n.unit.clone());
    Ok(rec.group.is_zero_element(diff.row(0)))
}
