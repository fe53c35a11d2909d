use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Smith normal form `U * M * V = D` together with `V^-1`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    /// Nonzero diagonal entries of `D`, positive, each dividing the next.
    pub diag: Vec<BigInt>,
    pub rows: usize,
    pub cols: usize,
}

impl Smith {
    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    /// The full diagonal matrix `D`.
    pub fn d(&self) -> IntMatrix {
        let mut d = IntMatrix::zeros(self.rows, self.cols);
        for (i, x) in self.diag.iter().enumerate() {
            d.set(i, i, x.clone());
        }
        d
    }
}

/// Quotient rounded to nearest, so remainders stay small.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    // floor division leaves r with the sign of b; r - b is the other candidate
    let (q, r) = a.div_mod_floor(b);
    let twice: BigInt = &r * 2;
    if twice.abs() > b.abs() {
        q + 1
    } else {
        q
    }
}

/// Smallest-magnitude nonzero entry of the trailing submatrix starting at
/// `(t, t)`, ties broken by `(row, col)`.
fn find_pivot(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let m = v.abs();
            if best.as_ref().map_or(true, |b| m < b.2) {
                best = Some((i, j, m));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);
    let mut diag = Vec::new();
    let mut t = 0;

    while t < rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&a, t) else { break };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);
        v_inv.swap_rows(t, pj);

        loop {
            let p = a.get(t, t).clone();
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -round_div(a.get(i, t), &p);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                dirty |= !a.get(i, t).is_zero();
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -round_div(a.get(t, j), &p);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                // inverse column operation acts on rows of V^-1
                let nq = -q;
                v_inv.add_row_multiple(t, j, &nq);
                dirty |= !a.get(t, j).is_zero();
            }
            if dirty {
                // move the smallest remainder in row/column t into the pivot
                let mut best: Option<(usize, usize, BigInt)> = None;
                for i in t..rows {
                    let x = a.get(i, t);
                    if !x.is_zero() && best.as_ref().map_or(true, |b| x.abs() < b.2) {
                        best = Some((i, t, x.abs()));
                    }
                }
                for j in t + 1..cols {
                    let x = a.get(t, j);
                    if !x.is_zero() && best.as_ref().map_or(true, |b| x.abs() < b.2) {
                        best = Some((t, j, x.abs()));
                    }
                }
                let (bi, bj, _) = best.expect("pivot row/column cannot vanish");
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                v_inv.swap_rows(t, bj);
                continue;
            }
            // row and column t are clear; enforce divisibility
            let p = a.get(t, t).clone();
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        diag.push(a.get(t, t).clone());
        t += 1;
    }
    Smith { u, v, v_inv, diag, rows, cols }
}

/// Row Hermite normal form: returns the nonzero rows of an echelon basis of
/// the row lattice, pivots positive, entries above each pivot reduced into
/// `[0, pivot)`.
pub fn hermite_rows(m: &IntMatrix) -> IntMatrix {
    let mut a = m.clone();
    let (rows, cols) = a.shape();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // gcd-reduce column c below row r
        loop {
            let mut best: Option<(usize, BigInt)> = None;
            for i in r..rows {
                let x = a.get(i, c);
                if !x.is_zero() && best.as_ref().map_or(true, |b| x.abs() < b.1) {
                    best = Some((i, x.abs()));
                }
            }
            let Some((bi, _)) = best else { break };
            a.swap_rows(r, bi);
            let p = a.get(r, c).clone();
            let mut done = true;
            for i in r + 1..rows {
                if a.get(i, c).is_zero() {
                    continue;
                }
                let q = -a.get(i, c).div_floor(&p);
                a.add_row_multiple(i, r, &q);
                if !a.get(i, c).is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if a.get(r, c).is_zero() {
            continue;
        }
        if a.get(r, c).is_negative() {
            a.negate_row(r);
        }
        let p = a.get(r, c).clone();
        for i in 0..r {
            let q = -a.get(i, c).div_floor(&p);
            a.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    a.row_range(0, r)
}

/// Reduces the row vector `v` modulo the lattice spanned by a Hermite basis
/// `h` (as returned by [`hermite_rows`]): the canonical coset representative.
pub fn reduce_mod_hermite(v: &[BigInt], h: &IntMatrix) -> Vec<BigInt> {
    let mut out = v.to_vec();
    for i in 0..h.rows() {
        let row = h.row(i);
        let Some(c) = row.iter().position(|x| !x.is_zero()) else { continue };
        let q = out[c].div_floor(&row[c]);
        if !q.is_zero() {
            for (o, x) in out.iter_mut().zip(row) {
                *o -= &q * x;
            }
        }
    }
    out
}

/// Solution of `X * A = B`.
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: IntMatrix,
    /// Rows span the left kernel `{x : x * A = 0}`.
    pub kernel: IntMatrix,
}

/// Solves `X * A = B` over the integers. `None` when no integer solution
/// exists.
pub fn solve_right(a: &IntMatrix, b: &IntMatrix) -> Option<Solution> {
    let s = smith_normal_form(a);
    solve_with(&s, b)
}

pub(crate) fn solve_with(s: &Smith, b: &IntMatrix) -> Option<Solution> {
    assert_eq!(b.cols(), s.cols, "solve_right: column mismatch");
    let bv = b * &s.v;
    let r = s.rank();
    let mut y = IntMatrix::zeros(b.rows(), s.rows);
    for i in 0..b.rows() {
        for j in 0..s.cols {
            let x = bv.get(i, j);
            if j < r {
                let (q, rem) = x.div_rem(&s.diag[j]);
                if !rem.is_zero() {
                    return None;
                }
                y.set(i, j, q);
            } else if !x.is_zero() {
                return None;
            }
        }
    }
    let particular = &y * &s.u;
    let kernel = s.u.row_range(r, s.rows);
    Some(Solution { particular, kernel })
}

/// Left kernel basis of `a`: rows `x` with `x * a = 0`.
pub fn left_kernel(a: &IntMatrix) -> IntMatrix {
    let s = smith_normal_form(a);
    s.u.row_range(s.rank(), s.rows)
}
