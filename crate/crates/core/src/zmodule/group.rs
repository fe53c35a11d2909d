use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::smith::{hermite_rows, reduce_mod_hermite, smith_normal_form, solve_with, Smith};
use crate::error::{Error, Result};

/// Finitely presented abelian group `Z^gens / rowspace(rels)`.
pub struct FgGroup {
    gens: usize,
    rels: IntMatrix,
    smith: OnceLock<Smith>,
}

impl Clone for FgGroup {
    fn clone(&self) -> Self {
        FgGroup { gens: self.gens, rels: self.rels.clone(), smith: self.smith.clone() }
    }
}

impl PartialEq for FgGroup {
    fn eq(&self, other: &Self) -> bool {
        self.gens == other.gens && self.rels == other.rels
    }
}

impl Eq for FgGroup {}

impl fmt::Debug for FgGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FgGroup({} gens, rels {:?}) ~ {}", self.gens, self.rels, self.describe())
    }
}

/// Isomorphism type `Z^rank + Z/d_1 + ... + Z/d_k` with `d_i | d_{i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Invariants {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for Invariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FgGroup {
    pub fn new(gens: usize, rels: IntMatrix) -> Result<Self> {
        if rels.cols() != gens && rels.rows() > 0 {
            return Err(Error::ShapeMismatch(format!(
                "relation matrix has {} columns, group has {} generators",
                rels.cols(),
                gens
            )));
        }
        let rels = if rels.rows() == 0 { IntMatrix::zeros(0, gens) } else { rels };
        Ok(FgGroup { gens, rels, smith: OnceLock::new() })
    }

    pub fn free(n: usize) -> Self {
        FgGroup { gens: n, rels: IntMatrix::zeros(0, n), smith: OnceLock::new() }
    }

    pub fn zero() -> Self {
        Self::free(0)
    }

    /// `Z/n` (with `n = 0` giving `Z` and `n = 1` the trivial group on one
    /// generator).
    pub fn cyclic(n: i64) -> Self {
        if n == 0 {
            return Self::free(1);
        }
        FgGroup { gens: 1, rels: IntMatrix::from_i64(&[vec![n]], 1), smith: OnceLock::new() }
    }

    /// Direct sum of the given groups, generators concatenated.
    pub fn direct_sum(parts: &[&FgGroup]) -> Self {
        let gens = parts.iter().map(|g| g.gens).sum();
        let rel_rows = parts.iter().map(|g| g.rels.rows()).sum();
        let mut rels = IntMatrix::zeros(rel_rows, gens);
        let (mut r0, mut c0) = (0, 0);
        for g in parts {
            rels.paste(r0, c0, &g.rels);
            r0 += g.rels.rows();
            c0 += g.gens;
        }
        FgGroup { gens, rels, smith: OnceLock::new() }
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn rels(&self) -> &IntMatrix {
        &self.rels
    }

    pub fn smith(&self) -> &Smith {
        self.smith.get_or_init(|| smith_normal_form(&self.rels))
    }

    pub fn invariants(&self) -> Invariants {
        let s = self.smith();
        let torsion: Vec<BigInt> = s.diag.iter().filter(|d| !d.is_one()).cloned().collect();
        Invariants { rank: self.gens - s.rank(), torsion }
    }

    pub fn describe(&self) -> String {
        self.invariants().to_string()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariants().is_trivial()
    }

    pub fn is_free(&self) -> bool {
        self.invariants().is_free()
    }

    pub fn rank(&self) -> usize {
        self.invariants().rank
    }

    /// Whether the row vector `v` represents zero.
    pub fn is_zero_element(&self, v: &[BigInt]) -> bool {
        debug_assert_eq!(v.len(), self.gens);
        if v.iter().all(|x| x.is_zero()) {
            return true;
        }
        let s = self.smith();
        let r = s.rank();
        for j in 0..self.gens {
            let mut acc = BigInt::zero();
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    acc += x * s.v.get(k, j);
                }
            }
            if j < r {
                if !acc.is_multiple_of(&s.diag[j]) {
                    return false;
                }
            } else if !acc.is_zero() {
                return false;
            }
        }
        true
    }

    /// Whether every row of `m` represents zero.
    pub fn rows_are_zero(&self, m: &IntMatrix) -> bool {
        (0..m.rows()).all(|i| self.is_zero_element(m.row(i)))
    }

    /// Same group, relations replaced by their Hermite basis.
    pub fn normalized(&self) -> FgGroup {
        FgGroup { gens: self.gens, rels: hermite_rows(&self.rels), smith: OnceLock::new() }
    }

    /// Canonical representative of the class of `v`.
    pub fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let h = hermite_rows(&self.rels);
        reduce_mod_hermite(v, &h)
    }

    /// Smaller presentation of the same group, with the change of
    /// coordinates in both directions.
    pub fn simplify(&self) -> Simplified {
        let s = self.smith();
        let r = s.rank();
        let keep: Vec<usize> = (0..self.gens).filter(|&j| j >= r || !s.diag[j].is_one()).collect();
        let mut rels_rows = Vec::new();
        for (k, &j) in keep.iter().enumerate() {
            if j < r {
                let mut row = vec![BigInt::zero(); keep.len()];
                row[k] = s.diag[j].clone();
                rels_rows.push(row);
            }
        }
        let n = keep.len();
        let group = FgGroup {
            gens: n,
            rels: IntMatrix::from_rows(rels_rows, n).expect("well-formed"),
            smith: OnceLock::new(),
        };
        Simplified { to_new: s.v.select_cols(&keep), to_old: s.v_inv.select_rows(&keep), group }
    }
}

/// Result of [`FgGroup::simplify`]: `to_new` maps old generators into the
/// new group, `to_old` maps new generators back; they are mutually inverse
/// isomorphisms.
#[derive(Clone, Debug)]
pub struct Simplified {
    pub group: FgGroup,
    pub to_new: IntMatrix,
    pub to_old: IntMatrix,
}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    gens: usize,
    #[serde(default)]
    rels: Option<IntMatrix>,
}

impl Serialize for FgGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr { gens: self.gens, rels: Some(self.rels.clone()) }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FgGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        let rels = match r.rels {
            Some(m) if m.rows() > 0 => m,
            _ => IntMatrix::zeros(0, r.gens),
        };
        FgGroup::new(r.gens, rels).map_err(serde::de::Error::custom)
    }
}

/// Homomorphism between presented groups, acting on row vectors from the
/// right: a `dom.gens x cod.gens` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMap {
    pub dom: FgGroup,
    pub cod: FgGroup,
    pub matrix: IntMatrix,
}

impl GroupMap {
    /// Checked constructor: shapes must agree and every domain relator must
    /// map into the codomain relations.
    pub fn new(dom: FgGroup, cod: FgGroup, matrix: IntMatrix) -> Result<Self> {
        check_shape(&dom, &cod, &matrix)?;
        if !is_well_defined(&dom, &cod, &matrix) {
            return Err(Error::NotWellDefined(format!("matrix {matrix:?} does not respect relations")));
        }
        Ok(GroupMap { dom, cod, matrix })
    }

    pub fn identity(g: &FgGroup) -> Self {
        GroupMap { dom: g.clone(), cod: g.clone(), matrix: IntMatrix::identity(g.gens()) }
    }

    pub fn zero(dom: &FgGroup, cod: &FgGroup) -> Self {
        GroupMap { dom: dom.clone(), cod: cod.clone(), matrix: IntMatrix::zeros(dom.gens(), cod.gens()) }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupMap) -> Result<GroupMap> {
        if self.cod != next.dom {
            return Err(Error::ShapeMismatch("composing maps with different middle groups".into()));
        }
        Ok(GroupMap { dom: self.dom.clone(), cod: next.cod.clone(), matrix: &self.matrix * &next.matrix })
    }

    pub fn is_zero(&self) -> bool {
        self.cod.rows_are_zero(&self.matrix)
    }

    pub fn equals(&self, other: &GroupMap) -> bool {
        self.matrix.shape() == other.matrix.shape() && maps_equal(&self.cod, &self.matrix, &other.matrix)
    }

    pub fn kernel(&self) -> (FgGroup, GroupMap) {
        let (k, inc) = kernel(&self.dom, &self.cod, &self.matrix);
        let m = GroupMap { dom: k.clone(), cod: self.dom.clone(), matrix: inc };
        (k, m)
    }

    pub fn cokernel(&self) -> (FgGroup, GroupMap) {
        let c = cokernel(&self.cod, &self.matrix);
        let m = GroupMap { dom: self.cod.clone(), cod: c.clone(), matrix: IntMatrix::identity(self.cod.gens()) };
        (c, m)
    }

    /// Image as a presented group, with the corestriction from the domain
    /// and the inclusion into the codomain.
    pub fn image(&self) -> (FgGroup, GroupMap, GroupMap) {
        let (img, onto, inc) = image(&self.dom, &self.cod, &self.matrix);
        (
            img.clone(),
            GroupMap { dom: self.dom.clone(), cod: img.clone(), matrix: onto },
            GroupMap { dom: img, cod: self.cod.clone(), matrix: inc },
        )
    }

    pub fn is_iso(&self) -> bool {
        is_iso(&self.dom, &self.cod, &self.matrix)
    }

    pub fn inverse(&self) -> Option<GroupMap> {
        inverse(&self.dom, &self.cod, &self.matrix)
            .map(|m| GroupMap { dom: self.cod.clone(), cod: self.dom.clone(), matrix: m })
    }
}

pub fn check_shape(dom: &FgGroup, cod: &FgGroup, m: &IntMatrix) -> Result<()> {
    if m.shape() != (dom.gens(), cod.gens()) {
        return Err(Error::ShapeMismatch(format!(
            "map matrix is {}x{}, expected {}x{}",
            m.rows(),
            m.cols(),
            dom.gens(),
            cod.gens()
        )));
    }
    Ok(())
}

pub fn is_well_defined(dom: &FgGroup, cod: &FgGroup, m: &IntMatrix) -> bool {
    if dom.rels().rows() == 0 {
        return true;
    }
    cod.rows_are_zero(&(dom.rels() * m))
}

/// Equality of two maps into `cod`, row by row modulo relations.
pub fn maps_equal(cod: &FgGroup, a: &IntMatrix, b: &IntMatrix) -> bool {
    if a == b {
        return true;
    }
    cod.rows_are_zero(&(a - b))
}

/// Cokernel of `f: A -> cod` given by matrix `f`: codomain relations stacked
/// with the rows of `f`. The projection is the identity matrix.
pub fn cokernel(cod: &FgGroup, f: &IntMatrix) -> FgGroup {
    let rels = cod.rels().vstack(f);
    FgGroup::new(cod.gens(), rels).expect("shapes agree")
}

/// Kernel of `f: dom -> cod`, as a simplified presented group together with
/// its inclusion matrix into `dom`.
pub fn kernel(dom: &FgGroup, cod: &FgGroup, f: &IntMatrix) -> (FgGroup, IntMatrix) {
    let n = dom.gens();
    // v in Z^n with v f in rowspace(cod.rels): project the left kernel of [f; R_cod]
    let stacked = f.vstack(cod.rels());
    let lk = super::smith::left_kernel(&stacked);
    let proj = lk.col_range(0, n);
    let basis = hermite_rows(&proj);
    // basis spans a lattice containing rowspace(dom.rels); express those
    let k = basis.rows();
    let rels = if dom.rels().rows() == 0 || k == 0 {
        IntMatrix::zeros(0, k)
    } else {
        let s = smith_normal_form(&basis);
        solve_with(&s, dom.rels()).expect("domain relations lie in the kernel lattice").particular
    };
    let raw = FgGroup::new(k, rels).expect("shapes agree");
    let simp = raw.simplify();
    let inclusion = &simp.to_old * &basis;
    (simp.group, inclusion)
}

/// Image of `f`: returns (image group, corestriction matrix, inclusion
/// matrix). The image is presented on the domain generators.
pub fn image(dom: &FgGroup, cod: &FgGroup, f: &IntMatrix) -> (FgGroup, IntMatrix, IntMatrix) {
    let (_, inc) = kernel(dom, cod, f);
    let img = cokernel(dom, &inc).normalized();
    (img, IntMatrix::identity(dom.gens()), f.clone())
}

/// Whether `f: A -> B` and `g: B -> C` are exact at `B`.
pub fn is_exact_at(f: &GroupMap, g: &GroupMap) -> Result<bool> {
    if f.cod != g.dom {
        return Err(Error::ShapeMismatch("exactness check on maps with different middle groups".into()));
    }
    Ok(exact_at(&f.cod, &g.cod, &f.matrix, &g.matrix))
}

/// Exactness at `b` of `f` (into `b`) followed by `g: b -> c`.
pub fn exact_at(b: &FgGroup, c: &FgGroup, f: &IntMatrix, g: &IntMatrix) -> bool {
    if !c.rows_are_zero(&(f * g)) {
        return false;
    }
    let (_, ker) = kernel(b, c, g);
    let quotient = cokernel(b, f);
    quotient.rows_are_zero(&ker)
}

pub fn is_injective(dom: &FgGroup, cod: &FgGroup, f: &IntMatrix) -> bool {
    let (k, _) = kernel(dom, cod, f);
    k.is_trivial()
}

pub fn is_surjective(cod: &FgGroup, f: &IntMatrix) -> bool {
    cokernel(cod, f).is_trivial()
}

pub fn is_iso(dom: &FgGroup, cod: &FgGroup, f: &IntMatrix) -> bool {
    is_surjective(cod, f) && is_injective(dom, cod, f)
}

/// Solves `x * f = target (mod cod relations)` for a row `target`, i.e. a
/// preimage of an element. `None` if the element is not in the image.
pub fn preimage_rows(cod: &FgGroup, f: &IntMatrix, target: &IntMatrix) -> Option<IntMatrix> {
    let stacked = f.vstack(cod.rels());
    let s = smith_normal_form(&stacked);
    let sol = solve_with(&s, target)?;
    Some(sol.particular.col_range(0, f.rows()))
}

/// Lifts `h: G -> cod` through `inc: K -> cod`, returning `x: G -> K` with
/// `x * inc = h`. Unique when `inc` is injective.
pub fn lift_through(cod: &FgGroup, inc: &IntMatrix, h: &IntMatrix) -> Option<IntMatrix> {
    if h.rows() == 0 {
        return Some(IntMatrix::zeros(0, inc.rows()));
    }
    preimage_rows(cod, inc, h)
}

/// Inverse of an isomorphism, `None` if `f` is not one.
pub fn inverse(dom: &FgGroup, cod: &FgGroup, f: &IntMatrix) -> Option<IntMatrix> {
    if !is_iso(dom, cod, f) {
        return None;
    }
    preimage_rows(cod, f, &IntMatrix::identity(cod.gens()))
}

/// Elements of `g` projecting onto a basis of `g / im(sub)`, chosen
/// deterministically. Fails if the quotient has torsion.
pub fn free_complement(g: &FgGroup, sub: &IntMatrix) -> Result<IntMatrix> {
    let quotient = cokernel(g, sub);
    let inv = quotient.invariants();
    if !inv.is_free() {
        return Err(Error::QuotientNotFree(format!("quotient is {inv}")));
    }
    let s = quotient.smith();
    let r = s.rank();
    if r == g.gens() {
        return Ok(IntMatrix::zeros(0, g.gens()));
    }
    let raw = s.v_inv.row_range(r, g.gens());
    let lattice = hermite_rows(quotient.rels());
    let basis = hermite_rows(&raw);
    let mut rows = Vec::with_capacity(basis.rows());
    for i in 0..basis.rows() {
        let mut v = reduce_mod_hermite(basis.row(i), &lattice);
        if let Some(first) = v.iter().find(|x| !x.is_zero()) {
            if first < &BigInt::zero() {
                v.iter_mut().for_each(|x| *x = -x.clone());
            }
        }
        rows.push(v);
    }
    Ok(IntMatrix::from_rows(rows, g.gens()).expect("well-formed"))
}
