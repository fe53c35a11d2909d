use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, SpaceFile};
use crate::zmodule::{vector_from_json, vector_to_json, FgGroup, IntMatrix};

use super::{Arrow, Kind, Module, ModuleMap, Obj};

/// On-disk form of a module. `space` is either an inline space or a path
/// relative to the module file.
#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct ModuleFile {
    pub space: Value,
    pub kind: Kind,
    #[serde(default)]
    pub groups: BTreeMap<String, FgGroup>,
    #[serde(default)]
    pub maps: BTreeMap<String, IntMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Value>,
}

fn read_space(v: &Value, base: Option<&Path>) -> Result<FiniteSpace> {
    match v {
        Value::String(p) => {
            let path = match base {
                Some(b) => b.join(p),
                None => p.into(),
            };
            FiniteSpace::from_json(&std::fs::read_to_string(path)?)
        }
        _ => FiniteSpace::from_file(&serde_json::from_value::<SpaceFile>(v.clone())?),
    }
}

/// Parses a module (and its optional unit) from JSON. Relative space paths
/// resolve against `base`.
pub fn module_from_value(v: Value, base: Option<&Path>) -> Result<(Module, Option<Vec<BigInt>>)> {
    let file: ModuleFile = serde_json::from_value(v)?;
    let space = Arc::new(read_space(&file.space, base)?);
    let kind = file.kind;
    let mut groups = BTreeMap::new();
    for (k, g) in file.groups {
        groups.insert(Obj::parse(&k, &space)?, g);
    }
    let mut maps = BTreeMap::new();
    for (k, m) in file.maps {
        maps.insert(Arrow::parse(&k, &space, kind)?, m);
    }
    let module = Module::new(space, kind, groups, maps)?;
    let unit = match file.unit {
        None => None,
        Some(u) => Some(vector_from_json(&u).ok_or_else(|| Error::Parse("unit must be a list of integers".into()))?),
    };
    Ok((module, unit))
}

pub fn load_module(path: &Path) -> Result<(Module, Option<Vec<BigInt>>)> {
    let text = std::fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text)?;
    module_from_value(v, path.parent())
}

/// Canonical JSON form. Forced maps (zero-generator ends, `i_Y^Y`, `r_Y^Y`)
/// and the ST groups of the empty set are left out.
pub fn module_to_value(m: &Module, unit: Option<&[BigInt]>) -> Value {
    let s = m.space();
    let mut groups = serde_json::Map::new();
    for (o, g) in m.groups() {
        if matches!(o, Obj::Lc(y, _) if y.is_empty()) {
            continue;
        }
        groups.insert(o.key(s), serde_json::to_value(g).expect("group serializes"));
    }
    let mut maps = serde_json::Map::new();
    for (a, mat) in m.maps() {
        if mat.rows() == 0 || mat.cols() == 0 {
            continue;
        }
        if matches!(a, Arrow::I { from, to, .. } | Arrow::R { from, to, .. } if from == to) && mat.is_identity() {
            continue;
        }
        maps.insert(a.key(s), serde_json::to_value(mat).expect("matrix serializes"));
    }
    let mut out = serde_json::Map::new();
    out.insert("space".into(), serde_json::to_value(s.to_file()).expect("space serializes"));
    out.insert("kind".into(), Value::from(m.kind().as_str()));
    out.insert("groups".into(), Value::Object(groups));
    out.insert("maps".into(), Value::Object(maps));
    if let Some(u) = unit {
        out.insert("unit".into(), vector_to_json(u));
    }
    Value::Object(out)
}

pub fn save_module(path: &Path, m: &Module, unit: Option<&[BigInt]>) -> Result<()> {
    let text = serde_json::to_string_pretty(&module_to_value(m, unit))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

/// On-disk form of a module map.
#[derive(Serialize, Deserialize, Debug, Clone)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub kind: Kind,
    pub source: String,
    pub target: String,
    pub components: BTreeMap<String, IntMatrix>,
}

impl ModuleMap {
    /// Parses components keyed by object and checks the map against `src`
    /// and `tgt`.
    pub fn from_keyed(src: &Module, tgt: &Module, comps: BTreeMap<String, IntMatrix>) -> Result<ModuleMap> {
        let mut components = BTreeMap::new();
        for (k, m) in comps {
            components.insert(Obj::parse(&k, src.space())?, m);
        }
        ModuleMap::new(src, tgt, components)
    }

    /// Components keyed by object, omitting those between groups without
    /// generators.
    pub fn to_keyed(&self, space: &FiniteSpace) -> BTreeMap<String, IntMatrix> {
        self.components()
            .iter()
            .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
            .map(|(o, m)| (o.key(space), m.clone()))
            .collect()
    }
}
