use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::zmodule::{check_shape, inverse, is_iso, is_well_defined, maps_equal, IntMatrix};

use super::{arrows, objects, Kind, Module, Obj};

/// A homomorphism of modules of one kind: one matrix per object.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleMap {
    kind: Kind,
    components: BTreeMap<Obj, IntMatrix>,
}

impl ModuleMap {
    /// Checked constructor: shapes, well-definedness and commutation with
    /// every generating arrow. Components between groups without
    /// generators may be omitted.
    pub fn new(src: &Module, tgt: &Module, mut components: BTreeMap<Obj, IntMatrix>) -> Result<ModuleMap> {
        if src.kind() != tgt.kind() {
            return Err(Error::ShapeMismatch(format!("map from a {}-module to a {}-module", src.kind(), tgt.kind())));
        }
        if src.space() != tgt.space() {
            return Err(Error::ShapeMismatch("modules over different spaces".into()));
        }
        let s = src.space();
        let objs = objects(s, src.kind());
        for o in &objs {
            let (a, b) = (src.group(o), tgt.group(o));
            match components.get_mut(o) {
                Some(m) => {
                    if m.rows() == 0 && m.cols() != b.gens() {
                        *m = IntMatrix::zeros(0, b.gens());
                    }
                    check_shape(a, b, m).map_err(|e| Error::ShapeMismatch(format!("{}: {e}", o.key(s))))?;
                    if !is_well_defined(a, b, m) {
                        return Err(Error::NotWellDefined(o.key(s)));
                    }
                }
                None if a.gens() == 0 || b.gens() == 0 => {
                    components.insert(*o, IntMatrix::zeros(a.gens(), b.gens()));
                }
                None => return Err(Error::ShapeIncomplete(format!("missing component {}", o.key(s)))),
            }
        }
        if components.len() != objs.len() {
            let extra = components.keys().find(|o| !objs.contains(o)).expect("extra component");
            return Err(Error::UnknownKey(extra.key(s)));
        }
        let f = ModuleMap { kind: src.kind(), components };
        if let Some(bad) = f.commutation_failure(src, tgt) {
            return Err(Error::InvalidModule(format!("map does not commute with {bad}")));
        }
        Ok(f)
    }

    /// Unchecked assembly, for maps whose commutation is verified later.
    pub(crate) fn raw(kind: Kind, components: BTreeMap<Obj, IntMatrix>) -> ModuleMap {
        ModuleMap { kind, components }
    }

    pub fn identity(m: &Module) -> ModuleMap {
        let components =
            m.groups().iter().map(|(o, g)| (*o, IntMatrix::identity(g.gens()))).collect();
        ModuleMap { kind: m.kind(), components }
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn component(&self, o: &Obj) -> &IntMatrix {
        &self.components[o]
    }

    pub fn components(&self) -> &BTreeMap<Obj, IntMatrix> {
        &self.components
    }

    /// Key of the first generating arrow the map fails to commute with.
    pub fn commutation_failure(&self, src: &Module, tgt: &Module) -> Option<String> {
        let k = src.kind();
        for a in arrows(src.space(), k) {
            let (from, to) = (a.source(k), a.target(k));
            let lhs = src.map(&a) * &self.components[&to];
            let rhs = &self.components[&from] * tgt.map(&a);
            if !maps_equal(tgt.group(&to), &lhs, &rhs) {
                return Some(a.key(src.space()));
            }
        }
        None
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &ModuleMap) -> ModuleMap {
        let components = self.components.iter().map(|(o, a)| (*o, a * &next.components[o])).collect();
        ModuleMap { kind: self.kind, components }
    }

    /// Slotwise equality as maps into `tgt`.
    pub fn equals(&self, other: &ModuleMap, tgt: &Module) -> bool {
        self.components.iter().all(|(o, a)| maps_equal(tgt.group(o), a, &other.components[o]))
    }

    /// Objects where the component is not an isomorphism.
    pub fn non_iso_slots(&self, src: &Module, tgt: &Module) -> Vec<Obj> {
        self.components.iter().filter(|(o, m)| !is_iso(src.group(o), tgt.group(o), m)).map(|(o, _)| *o).collect()
    }

    pub fn is_iso(&self, src: &Module, tgt: &Module) -> bool {
        self.non_iso_slots(src, tgt).is_empty()
    }

    /// Slotwise inverse of an isomorphism.
    pub fn inverse(&self, src: &Module, tgt: &Module) -> Option<ModuleMap> {
        let mut components = BTreeMap::new();
        for (o, m) in &self.components {
            components.insert(*o, inverse(src.group(o), tgt.group(o), m)?);
        }
        Some(ModuleMap { kind: self.kind, components })
    }
}
