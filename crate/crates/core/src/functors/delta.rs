use crate::invariants::{st_pairs, Arrow, Kind, Module, Report};
use crate::zmodule::{maps_equal, IntMatrix};

/// Checks that every boundary map `δ_C^U` of an ST-module is the sum, over
/// arrows `x -> y` with `x` in `U` and `y` in `C`, of the point boundary
/// `δ_{down y}^{up x}` conjugated into `(C, U)` by restrictions and
/// inclusions. Both parities.
pub fn verify_delta_decomposition(m: &Module) -> Report {
    let mut rep = Report::new("delta decomposition");
    assert_eq!(m.kind(), Kind::St, "delta decomposition is a property of ST-modules");
    let s = m.space();
    let get = |a: Arrow| m.maps().get(&a);
    for (y, u) in st_pairs(s) {
        let c = y.minus(u);
        if u.is_empty() || c.is_empty() {
            continue;
        }
        for parity in [0u8, 1] {
            let q = 1 - parity;
            let direct = m.st_d(c, u, parity);
            let mut acc = IntMatrix::zeros(direct.rows(), direct.cols());
            let mut missing = None;
            for &(x, b) in s.covers() {
                if !u.contains(x) || !c.contains(b) {
                    continue;
                }
                let (db, ux) = (s.down(b), s.up(x));
                let chain = [
                    Arrow::R { from: c, to: db.inter(c), parity },
                    Arrow::I { from: db.inter(c), to: db, parity },
                    Arrow::D { from: db, to: ux, parity },
                    Arrow::R { from: ux, to: ux.inter(u), parity: q },
                    Arrow::I { from: ux.inter(u), to: u, parity: q },
                ];
                let mut term: Option<IntMatrix> = None;
                for a in chain {
                    match get(a) {
                        Some(mat) => term = Some(term.map_or_else(|| mat.clone(), |t| &t * mat)),
                        None => {
                            missing = Some(a);
                            break;
                        }
                    }
                }
                match term {
                    Some(t) if missing.is_none() => acc = &acc + &t,
                    _ => break,
                }
            }
            let ok = missing.is_none() && maps_equal(m.st_group(u, q), direct, &acc);
            let more = rep.record(ok, || match missing {
                Some(a) => format!("generator {} needed for the decomposition is missing", a.key(s)),
                None => format!("d:{}->{}:{parity}{q} differs from its decomposition", s.join_names(c), s.join_names(u)),
            });
            if !more {
                return rep;
            }
        }
    }
    rep
}
