//! Named spaces and standard modules used by the fixtures, the self-test
//! and the test suites.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::Result;
use crate::functors::pushforward;
use crate::invariants::{arrows, objects, Arrow, Kind, Module, ModuleBuilder, Obj};
use crate::space::{FiniteSpace, Subset};
use crate::zmodule::{FgGroup, IntMatrix};

fn build(points: &[&str], covers: &[(&str, &str)]) -> FiniteSpace {
    FiniteSpace::new(points, covers).expect("catalog spaces are valid")
}

pub fn one_point() -> FiniteSpace {
    build(&["x"], &[])
}

/// `{1, 2}` with `2 -> 1`; the point `2` is open.
pub fn sierpinski() -> FiniteSpace {
    chain(2)
}

/// The linear space `n -> ... -> 2 -> 1`.
pub fn chain(n: usize) -> FiniteSpace {
    let names: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let pairs: Vec<(usize, usize)> = (1..n).map(|i| (i, i - 1)).collect();
    FiniteSpace::from_indices(names, &pairs).expect("chains are valid")
}

/// The diamond `4 -> 3, 4 -> 2, 3 -> 1, 2 -> 1`.
pub fn diamond() -> FiniteSpace {
    build(&["1", "2", "3", "4"], &[("4", "3"), ("4", "2"), ("3", "1"), ("2", "1")])
}

/// Two closed points `a, b` below two open points `c, d`.
pub fn pseudocircle() -> FiniteSpace {
    build(&["a", "b", "c", "d"], &[("c", "a"), ("c", "b"), ("d", "a"), ("d", "b")])
}

/// The zigzag `1 <- 2 -> 3 <- 4`.
pub fn zigzag4() -> FiniteSpace {
    build(&["1", "2", "3", "4"], &[("2", "1"), ("2", "3"), ("4", "3")])
}

/// A tree with a point of degree three: `2, 3, 4 -> 1` and `5 -> 2`.
pub fn forest5() -> FiniteSpace {
    build(&["1", "2", "3", "4", "5"], &[("2", "1"), ("3", "1"), ("4", "1"), ("5", "2")])
}

/// The sixteen-point unique path space with an elementary boundary pair
/// `({x1..x8}, {y1..y8})` not of point form.
pub fn q_space() -> FiniteSpace {
    let mut names: Vec<String> = (1..=8).map(|i| format!("x{i}")).collect();
    names.extend((1..=8).map(|i| format!("y{i}")));
    let covers = [
        ("y2", "y1"), ("y2", "y3"), ("y4", "y3"), ("y4", "y5"),
        ("y6", "y5"), ("y6", "y7"), ("y8", "y7"), ("y8", "y1"),
        ("x2", "x1"), ("x4", "x3"), ("x6", "x5"), ("x8", "x7"),
        ("x2", "x3"), ("x4", "x5"), ("x6", "x7"), ("x8", "x1"),
        ("x5", "y3"), ("x3", "y1"), ("x1", "y7"), ("x7", "y5"),
        ("x2", "y4"), ("x4", "y6"), ("x6", "y8"), ("x8", "y2"),
    ];
    let pts: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    build(&pts, &covers)
}

/// The spaces of the reconstruction and lifting corpus.
pub fn corpus_spaces() -> Vec<(&'static str, FiniteSpace)> {
    vec![
        ("sierpinski", sierpinski()),
        ("chain3", chain(3)),
        ("chain4", chain(4)),
        ("zigzag4", zigzag4()),
        ("forest5", forest5()),
    ]
}

/// ST builder with every group trivial.
fn zero_st(space: &Arc<FiniteSpace>) -> ModuleBuilder {
    let mut b = ModuleBuilder::new(space.clone(), Kind::St);
    for o in objects(space, Kind::St) {
        b.group(o, FgGroup::zero());
    }
    b
}

/// The point module: `Z/n` (`Z` for `n = 0`) in the given parity at every
/// locally closed set containing `x`, identities between them, zero
/// boundary maps.
pub fn point_module(space: &Arc<FiniteSpace>, x: usize, parity: u8, n: i64) -> Result<Module> {
    let mut b = zero_st(space);
    for o in objects(space, Kind::St) {
        if let Obj::Lc(y, p) = o {
            if p == parity && y.contains(x) {
                b.group(o, FgGroup::cyclic(n));
            }
        }
    }
    for a in arrows(space, Kind::St) {
        match a {
            Arrow::I { from, to, parity: p } | Arrow::R { from, to, parity: p }
                if p == parity && from.contains(x) && to.contains(x) =>
            {
                b.map(a, IntMatrix::identity(1));
            }
            _ => {}
        }
    }
    b.build()
}

/// `Z` at `({lower},1)` and `({upper},0)` joined by an invertible
/// boundary map, zero elsewhere. `upper -> lower` must be an arrow.
fn two_point_extension(space: &Arc<FiniteSpace>, lower: usize, upper: usize) -> Result<Module> {
    let (c, u) = (Subset::singleton(lower), Subset::singleton(upper));
    let mut b = zero_st(space);
    b.group(Obj::Lc(c, 1), FgGroup::free(1));
    b.group(Obj::Lc(u, 0), FgGroup::free(1));
    b.map(Arrow::D { from: c, to: u, parity: 1 }, IntMatrix::identity(1));
    b.build()
}

/// The extension module on the Sierpinski space: `Z` at `({1},1)` and
/// `({2},0)` joined by an invertible boundary map.
pub fn sierpinski_extension() -> Module {
    two_point_extension(&Arc::new(sierpinski()), 0, 1).expect("extension module is valid")
}

/// The Sierpinski extension module carried by the arrow `x -> y` and
/// extended by zero.
pub fn extension_module(space: &Arc<FiniteSpace>, x: usize, y: usize) -> Result<Module> {
    let sub = Subset::singleton(x).with(y);
    let (local, pts) = space.subspace(sub)?;
    let at = |p: usize| pts.iter().position(|&q| q == p).expect("member");
    let ext = two_point_extension(&Arc::new(local), at(y), at(x))?;
    pushforward(&ext, space, sub)
}

/// A module with a single nonzero generator map changed by `+1` in its
/// first entry.
pub fn perturbed(m: &Module, target: Arrow) -> Result<Module> {
    let mut b = ModuleBuilder::new(m.space_arc().clone(), m.kind());
    for (o, g) in m.groups() {
        b.group(*o, g.clone());
    }
    for (a, mat) in m.maps() {
        let mut mat = mat.clone();
        if *a == target && mat.rows() > 0 && mat.cols() > 0 {
            let v = mat.get(0, 0) + BigInt::from(1);
            mat.set(0, 0, v);
        }
        b.map(*a, mat);
    }
    b.build()
}
