use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{FiniteSpace, Subset};

/// Which category a module is over.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    St,
    B,
    R,
    Tb,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::St => "st",
            Kind::B => "b",
            Kind::R => "r",
            Kind::Tb => "tb",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Kind> {
        match s {
            "st" => Ok(Kind::St),
            "b" => Ok(Kind::B),
            "r" => Ok(Kind::R),
            "tb" => Ok(Kind::Tb),
            _ => Err(Error::Parse(format!("unknown module kind {s:?}"))),
        }
    }
}

/// An object of one of the four categories.
///
/// `Lc(Y, j)` is the ST object `(Y, j)`. For the other kinds, `K1(x)` is the
/// odd group of the point `x`, `Bd(x)` the even group of the open boundary
/// of `x`, `Open(x)` the even group of `up(x)` and `Cl(x)` the odd group of
/// `down(x)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    Lc(Subset, u8),
    K1(usize),
    Bd(usize),
    Open(usize),
    Cl(usize),
}

/// A generating arrow.
///
/// ST arrows carry the parity of their source: `I` is `i_U^Y`, `R` is
/// `r_Y^C` and `D` is `δ_C^U`, stored as `from`/`to` in arrow direction.
/// Point-indexed arrows use cover pairs `x -> y`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arrow {
    I { from: Subset, to: Subset, parity: u8 },
    R { from: Subset, to: Subset, parity: u8 },
    D { from: Subset, to: Subset, parity: u8 },
    /// `cl x -> cl y` for `x -> y`.
    Res(usize, usize),
    /// `cl y -> open x` for `x -> y`.
    Bd(usize, usize),
    /// `open x -> open y` for `x -> y` (B and TB).
    Inc(usize, usize),
    /// `open y -> bd x` for `y -> x` (R).
    IncBd(usize, usize),
    /// `k1 x -> cl x` (TB) or `bd x -> open x` (R).
    U(usize),
    /// `k1 x -> bd x` (R).
    Delta(usize),
}

impl Obj {
    pub fn key(&self, s: &FiniteSpace) -> String {
        match *self {
            Obj::Lc(y, p) => format!("lc:{}:{p}", s.join_names(y)),
            Obj::K1(x) => format!("k1:{}", s.name(x)),
            Obj::Bd(x) => format!("bd:{}", s.name(x)),
            Obj::Open(x) => format!("open:{}", s.name(x)),
            Obj::Cl(x) => format!("cl:{}", s.name(x)),
        }
    }

    /// Parses a group key. Membership in the schema of a kind is checked by
    /// the caller.
    pub fn parse(key: &str, s: &FiniteSpace) -> Result<Obj> {
        let bad = || Error::UnknownKey(key.to_string());
        let (head, rest) = key.split_once(':').ok_or_else(bad)?;
        let point = |r: &str| s.index_of(r).map_err(|_| bad());
        Ok(match head {
            "lc" => {
                let (names, p) = rest.rsplit_once(':').ok_or_else(bad)?;
                Obj::Lc(s.parse_names(names).map_err(|_| bad())?, parse_parity(p).ok_or_else(bad)?)
            }
            "k1" => Obj::K1(point(rest)?),
            "bd" => Obj::Bd(point(rest)?),
            "open" => Obj::Open(point(rest)?),
            "cl" => Obj::Cl(point(rest)?),
            _ => return Err(bad()),
        })
    }
}

fn parse_parity(p: &str) -> Option<u8> {
    match p {
        "0" => Some(0),
        "1" => Some(1),
        _ => None,
    }
}

impl Arrow {
    /// Source object. `U` depends on the kind: `k1 x` in TB, `bd x` in R.
    pub fn source(&self, kind: Kind) -> Obj {
        match *self {
            Arrow::I { from, parity, .. } | Arrow::R { from, parity, .. } | Arrow::D { from, parity, .. } => {
                Obj::Lc(from, parity)
            }
            Arrow::Res(x, _) => Obj::Cl(x),
            Arrow::Bd(_, y) => Obj::Cl(y),
            Arrow::Inc(x, _) | Arrow::IncBd(x, _) => Obj::Open(x),
            Arrow::U(x) => match kind {
                Kind::R => Obj::Bd(x),
                _ => Obj::K1(x),
            },
            Arrow::Delta(x) => Obj::K1(x),
        }
    }

    /// Target object. `U` depends on the kind: `cl x` in TB, `open x` in R.
    pub fn target(&self, kind: Kind) -> Obj {
        match *self {
            Arrow::I { to, parity, .. } | Arrow::R { to, parity, .. } => Obj::Lc(to, parity),
            Arrow::D { to, parity, .. } => Obj::Lc(to, 1 - parity),
            Arrow::Res(_, y) => Obj::Cl(y),
            Arrow::Bd(x, _) => Obj::Open(x),
            Arrow::Inc(_, y) => Obj::Open(y),
            Arrow::IncBd(_, x) => Obj::Bd(x),
            Arrow::U(x) => match kind {
                Kind::R => Obj::Open(x),
                _ => Obj::Cl(x),
            },
            Arrow::Delta(x) => Obj::Bd(x),
        }
    }

    pub fn key(&self, s: &FiniteSpace) -> String {
        match *self {
            Arrow::I { from, to, parity } => format!("i:{}->{}:{parity}", s.join_names(from), s.join_names(to)),
            Arrow::R { from, to, parity } => format!("r:{}->{}:{parity}", s.join_names(from), s.join_names(to)),
            Arrow::D { from, to, parity } => {
                format!("d:{}->{}:{}{}", s.join_names(from), s.join_names(to), parity, 1 - parity)
            }
            Arrow::Res(x, y) => format!("r:{}>{}", s.name(x), s.name(y)),
            Arrow::Bd(x, y) => format!("d:{}>{}", s.name(x), s.name(y)),
            Arrow::Inc(x, y) | Arrow::IncBd(x, y) => format!("i:{}>{}", s.name(x), s.name(y)),
            Arrow::U(x) => format!("u:{}", s.name(x)),
            Arrow::Delta(x) => format!("d:{}", s.name(x)),
        }
    }

    pub fn parse(key: &str, s: &FiniteSpace, kind: Kind) -> Result<Arrow> {
        let bad = || Error::UnknownKey(key.to_string());
        let (head, rest) = key.split_once(':').ok_or_else(bad)?;
        let point = |r: &str| s.index_of(r).map_err(|_| bad());
        if kind == Kind::St {
            let (body, p) = rest.rsplit_once(':').ok_or_else(bad)?;
            let (a, b) = body.split_once("->").ok_or_else(bad)?;
            let from = s.parse_names(a).map_err(|_| bad())?;
            let to = s.parse_names(b).map_err(|_| bad())?;
            return Ok(match head {
                "i" => Arrow::I { from, to, parity: parse_parity(p).ok_or_else(bad)? },
                "r" => Arrow::R { from, to, parity: parse_parity(p).ok_or_else(bad)? },
                "d" => match p {
                    "10" => Arrow::D { from, to, parity: 1 },
                    "01" => Arrow::D { from, to, parity: 0 },
                    _ => return Err(bad()),
                },
                _ => return Err(bad()),
            });
        }
        let pair = |r: &str| -> Result<(usize, usize)> {
            let (a, b) = r.split_once('>').ok_or_else(bad)?;
            Ok((point(a)?, point(b)?))
        };
        Ok(match head {
            "r" => {
                let (x, y) = pair(rest)?;
                Arrow::Res(x, y)
            }
            "d" if rest.contains('>') => {
                let (x, y) = pair(rest)?;
                Arrow::Bd(x, y)
            }
            "d" => Arrow::Delta(point(rest)?),
            "i" => {
                let (x, y) = pair(rest)?;
                if kind == Kind::R { Arrow::IncBd(x, y) } else { Arrow::Inc(x, y) }
            }
            "u" => Arrow::U(point(rest)?),
            _ => return Err(bad()),
        })
    }
}

/// Pairs `(Y, U)` with `Y` locally closed and `U` relatively open in `Y`,
/// ordered by `Y` as in [`FiniteSpace::enumerate_lc`] and then by `U`.
pub fn st_pairs(s: &FiniteSpace) -> Vec<(Subset, Subset)> {
    let mut out = Vec::new();
    for lc in s.enumerate_lc() {
        let y = lc.set;
        for u in y.subsets() {
            if s.is_open_in(u, y) {
                out.push((y, u));
            }
        }
    }
    out
}

/// All objects of the given kind, in a fixed order.
pub fn objects(s: &FiniteSpace, kind: Kind) -> Vec<Obj> {
    let n = s.len();
    match kind {
        Kind::St => {
            let mut v = Vec::new();
            for lc in s.enumerate_lc() {
                v.push(Obj::Lc(lc.set, 0));
                v.push(Obj::Lc(lc.set, 1));
            }
            v
        }
        Kind::B => (0..n).flat_map(|x| [Obj::Cl(x), Obj::Open(x)]).collect(),
        Kind::R => (0..n).flat_map(|x| [Obj::K1(x), Obj::Bd(x), Obj::Open(x)]).collect(),
        Kind::Tb => (0..n).flat_map(|x| [Obj::K1(x), Obj::Cl(x), Obj::Open(x)]).collect(),
    }
}

/// All generating arrows of the given kind, in a fixed order.
pub fn arrows(s: &FiniteSpace, kind: Kind) -> Vec<Arrow> {
    let mut v = Vec::new();
    match kind {
        Kind::St => {
            for (y, u) in st_pairs(s) {
                let c = y.minus(u);
                for parity in [0, 1] {
                    v.push(Arrow::I { from: u, to: y, parity });
                    v.push(Arrow::R { from: y, to: c, parity });
                    v.push(Arrow::D { from: c, to: u, parity });
                }
            }
        }
        Kind::B | Kind::Tb => {
            if kind == Kind::Tb {
                v.extend((0..s.len()).map(Arrow::U));
            }
            for &(x, y) in s.covers() {
                v.push(Arrow::Res(x, y));
                v.push(Arrow::Bd(x, y));
                v.push(Arrow::Inc(x, y));
            }
        }
        Kind::R => {
            for x in 0..s.len() {
                v.push(Arrow::Delta(x));
                v.push(Arrow::U(x));
            }
            for &(y, x) in s.covers() {
                v.push(Arrow::IncBd(y, x));
            }
        }
    }
    v
}
