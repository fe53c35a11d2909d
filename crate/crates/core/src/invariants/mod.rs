//! Modules over ST, B, R and TB: storage, relation checks, exactness,
//! pointed variants and module maps.

mod exact;
mod io;
mod keys;
mod morphism;
mod pointed;
mod relations;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, Subset};
use crate::zmodule::{check_shape, is_well_defined, FgGroup, IntMatrix};

pub(crate) use exact::b_sequence;
pub use exact::{cover_sequence_exact, is_exact, is_rrz, r_boundary_assembly, six_term_exact_at};
pub use io::{load_module, module_from_value, module_to_value, save_module, MapFile, ModuleFile};
pub use keys::{arrows, objects, st_pairs, Arrow, Kind, Obj};
pub use morphism::ModuleMap;
pub use pointed::{check_pointed_map, unit_receptacle, upper_bound_relations, PointedModule, Receptacle};
pub use relations::validate_module;

/// Outcome of a relation or exactness check: how many instances were
/// examined and the first one that failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub check: String,
    pub passed: bool,
    pub instances: usize,
    pub failure: Option<String>,
}

impl Report {
    pub(crate) fn new(check: &str) -> Report {
        Report { check: check.to_string(), passed: true, instances: 0, failure: None }
    }

    /// Records one instance; returns `false` once a failure is recorded.
    pub(crate) fn record(&mut self, ok: bool, what: impl FnOnce() -> String) -> bool {
        self.instances += 1;
        if !ok && self.passed {
            self.passed = false;
            self.failure = Some(what());
        }
        self.passed
    }
}

/// A module over one of the four categories: a finitely presented group for
/// every object and a matrix for every generating arrow.
#[derive(Clone, Debug)]
pub struct Module {
    space: Arc<FiniteSpace>,
    kind: Kind,
    groups: BTreeMap<Obj, FgGroup>,
    maps: BTreeMap<Arrow, IntMatrix>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && *self.space == *other.space && self.groups == other.groups && self.maps == other.maps
    }
}

impl Module {
    /// Checked constructor.
    ///
    /// Missing groups are an error except the ST groups of the empty set.
    /// Missing maps are filled in when their matrix is forced: a source or
    /// target with no generators, or `i_Y^Y` and `r_Y^Y`.
    pub fn new(
        space: Arc<FiniteSpace>,
        kind: Kind,
        mut groups: BTreeMap<Obj, FgGroup>,
        mut maps: BTreeMap<Arrow, IntMatrix>,
    ) -> Result<Module> {
        if matches!(kind, Kind::B | Kind::Tb) && !space.is_unique_path() {
            return Err(Error::SpaceNotUniquePath(format!("{kind}-modules need unique paths")));
        }
        let objs = objects(&space, kind);
        for o in &objs {
            if groups.contains_key(o) {
                continue;
            }
            match o {
                Obj::Lc(y, _) if y.is_empty() => {
                    groups.insert(*o, FgGroup::zero());
                }
                _ => return Err(Error::ShapeIncomplete(format!("missing group {}", o.key(&space)))),
            }
        }
        if groups.len() != objs.len() {
            let known: std::collections::BTreeSet<Obj> = objs.iter().copied().collect();
            let extra = groups.keys().find(|o| !known.contains(o)).expect("extra group");
            return Err(Error::UnknownKey(extra.key(&space)));
        }
        for o in &objs {
            if let Obj::Lc(y, _) = o {
                if y.is_empty() && !groups[o].is_trivial() {
                    return Err(Error::InvalidModule(format!("group {} must be trivial", o.key(&space))));
                }
            }
        }
        let arrs = arrows(&space, kind);
        for a in &arrs {
            let dom = &groups[&a.source(kind)];
            let cod = &groups[&a.target(kind)];
            if let Some(m) = maps.get_mut(a) {
                if m.rows() == 0 && m.cols() != cod.gens() {
                    *m = IntMatrix::zeros(0, cod.gens());
                }
                check_shape(dom, cod, m)
                    .map_err(|e| Error::ShapeMismatch(format!("{}: {e}", a.key(&space))))?;
                if !is_well_defined(dom, cod, m) {
                    return Err(Error::NotWellDefined(a.key(&space)));
                }
                continue;
            }
            let filled = match a {
                _ if dom.gens() == 0 || cod.gens() == 0 => IntMatrix::zeros(dom.gens(), cod.gens()),
                Arrow::I { from, to, .. } | Arrow::R { from, to, .. } if from == to => IntMatrix::identity(dom.gens()),
                _ => return Err(Error::ShapeIncomplete(format!("missing map {}", a.key(&space)))),
            };
            maps.insert(*a, filled);
        }
        if maps.len() != arrs.len() {
            let known: std::collections::BTreeSet<Arrow> = arrs.iter().copied().collect();
            let extra = maps.keys().find(|a| !known.contains(a)).expect("extra map");
            return Err(Error::UnknownKey(extra.key(&space)));
        }
        Ok(Module { space, kind, groups, maps })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn groups(&self) -> &BTreeMap<Obj, FgGroup> {
        &self.groups
    }

    pub fn maps(&self) -> &BTreeMap<Arrow, IntMatrix> {
        &self.maps
    }

    /// Group at an object of this module's kind. Panics on foreign objects.
    pub fn group(&self, o: &Obj) -> &FgGroup {
        self.groups.get(o).unwrap_or_else(|| panic!("no group {} in {}-module", o.key(&self.space), self.kind))
    }

    pub fn map(&self, a: &Arrow) -> &IntMatrix {
        self.maps.get(a).unwrap_or_else(|| panic!("no map {} in {}-module", a.key(&self.space), self.kind))
    }

    pub fn source(&self, a: &Arrow) -> &FgGroup {
        self.group(&a.source(self.kind))
    }

    pub fn target(&self, a: &Arrow) -> &FgGroup {
        self.group(&a.target(self.kind))
    }

    pub fn st_group(&self, y: Subset, parity: u8) -> &FgGroup {
        self.group(&Obj::Lc(y, parity))
    }

    /// `i_U^Y` in the given parity.
    pub fn st_i(&self, u: Subset, y: Subset, parity: u8) -> &IntMatrix {
        self.map(&Arrow::I { from: u, to: y, parity })
    }

    /// `r_Y^C` in the given parity.
    pub fn st_r(&self, y: Subset, c: Subset, parity: u8) -> &IntMatrix {
        self.map(&Arrow::R { from: y, to: c, parity })
    }

    /// `δ_C^U` starting in the given parity.
    pub fn st_d(&self, c: Subset, u: Subset, parity: u8) -> &IntMatrix {
        self.map(&Arrow::D { from: c, to: u, parity })
    }

    /// Composite `open y -> open x` along the path `[y, ..., x]`: arrow
    /// inclusions in B and TB, `i` followed by `u` at each step in R.
    pub fn path_inclusion(&self, p: &[usize]) -> IntMatrix {
        let start = self.group(&Obj::Open(p[0])).gens();
        let mut acc = IntMatrix::identity(start);
        for w in p.windows(2) {
            let step = match self.kind {
                Kind::R => self.map(&Arrow::IncBd(w[0], w[1])) * self.map(&Arrow::U(w[1])),
                Kind::B | Kind::Tb => self.map(&Arrow::Inc(w[0], w[1])).clone(),
                Kind::St => panic!("path inclusions are defined on point-indexed kinds"),
            };
            acc = &acc * &step;
        }
        acc
    }

    /// `open y -> open x` for `x <= y`, along the first path.
    pub fn inclusion_between(&self, y: usize, x: usize) -> IntMatrix {
        let paths = self.space.paths(y, x);
        self.path_inclusion(paths.first().expect("x <= y"))
    }
}

/// Incremental construction of a [`Module`].
#[derive(Clone, Debug)]
pub struct ModuleBuilder {
    space: Arc<FiniteSpace>,
    kind: Kind,
    groups: BTreeMap<Obj, FgGroup>,
    maps: BTreeMap<Arrow, IntMatrix>,
}

impl ModuleBuilder {
    pub fn new(space: Arc<FiniteSpace>, kind: Kind) -> ModuleBuilder {
        ModuleBuilder { space, kind, groups: BTreeMap::new(), maps: BTreeMap::new() }
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn group(&mut self, o: Obj, g: FgGroup) -> &mut Self {
        self.groups.insert(o, g);
        self
    }

    pub fn map(&mut self, a: Arrow, m: IntMatrix) -> &mut Self {
        self.maps.insert(a, m);
        self
    }

    pub fn get_group(&self, o: &Obj) -> Option<&FgGroup> {
        self.groups.get(o)
    }

    pub fn build(self) -> Result<Module> {
        Module::new(self.space, self.kind, self.groups, self.maps)
    }
}
