//! Finite T0-spaces as finite posets.
//!
//! Convention: `y -> x` means `y` covers `x` (so `x < y`), open sets are
//! up-sets and closed sets are down-sets. For a point `x`, `up(x)` is the
//! minimal open neighbourhood and `down(x)` the closure of `{x}`.

mod classify;
mod subset;

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

pub use classify::{SpaceClass, SpaceWitness};
pub use subset::{Subset, SubsetIter};

use crate::error::{Error, Result};

pub const MAX_POINTS: usize = 64;

/// A path `y = z_n -> ... -> z_1 = x`, stored as `[y, ..., x]`.
pub type Path = Vec<usize>;

#[derive(Clone, Debug)]
pub struct FiniteSpace {
    points: Vec<String>,
    index: HashMap<String, usize>,
    covers: Vec<(usize, usize)>,
    up: Vec<Subset>,
    down: Vec<Subset>,
    parents: Vec<Subset>,
    children: Vec<Subset>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.points == other.points && self.covers == other.covers
    }
}

impl Eq for FiniteSpace {}

/// A locally closed subset in its canonical presentation
/// `set = open_hull \ open_boundary`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocallyClosedSet {
    pub set: Subset,
    pub open_hull: Subset,
    pub open_boundary: Subset,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SpaceFile {
    pub points: Vec<String>,
    #[serde(default)]
    pub covers: Vec<[String; 2]>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || matches!(c, ',' | ':' | '>' | '{' | '}'))
}

impl FiniteSpace {
    /// Builds a space from point names and cover pairs `(y, x)` meaning
    /// `y -> x`. Redundant pairs implied by transitivity are dropped.
    pub fn new<S: AsRef<str>>(points: &[S], covers: &[(S, S)]) -> Result<Self> {
        let names: Vec<String> = points.iter().map(|p| p.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (i, p) in names.iter().enumerate() {
            if !valid_name(p) {
                return Err(Error::InvalidPointName(p.clone()));
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        let mut pairs = Vec::with_capacity(covers.len());
        for (y, x) in covers {
            let yi = *index.get(y.as_ref()).ok_or_else(|| Error::UnknownPoint(y.as_ref().to_string()))?;
            let xi = *index.get(x.as_ref()).ok_or_else(|| Error::UnknownPoint(x.as_ref().to_string()))?;
            pairs.push((yi, xi));
        }
        Self::from_indices(names, &pairs)
    }

    /// Builds a space from names and index pairs `(y, x)` with `y -> x`.
    pub fn from_indices(names: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self> {
        let n = names.len();
        if n > MAX_POINTS {
            return Err(Error::TooManyPoints(n));
        }
        let mut index = HashMap::new();
        for (i, p) in names.iter().enumerate() {
            if !valid_name(p) {
                return Err(Error::InvalidPointName(p.clone()));
            }
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        // above[x] = points strictly greater than x, by fixpoint iteration
        let mut direct = vec![Subset::EMPTY; n];
        for &(y, x) in pairs {
            if y >= n || x >= n {
                return Err(Error::UnknownPoint(format!("index {}", y.max(x))));
            }
            if y == x {
                return Err(Error::CycleDetected(names[x].clone()));
            }
            direct[x] = direct[x].with(y);
        }
        let mut above = direct.clone();
        loop {
            let mut changed = false;
            for x in 0..n {
                let mut acc = above[x];
                for y in above[x].iter() {
                    acc = acc.union(above[y]);
                }
                if acc != above[x] {
                    above[x] = acc;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(x) = (0..n).find(|&x| above[x].contains(x)) {
            return Err(Error::CycleDetected(names[x].clone()));
        }
        // y covers x iff x < y with nothing strictly between
        let mut covers = Vec::new();
        let mut parents = vec![Subset::EMPTY; n];
        let mut children = vec![Subset::EMPTY; n];
        for x in 0..n {
            for y in above[x].iter() {
                let between = above[x].iter().any(|z| z != y && above[z].contains(y));
                if !between {
                    covers.push((y, x));
                    parents[x] = parents[x].with(y);
                    children[y] = children[y].with(x);
                }
            }
        }
        covers.sort();
        let up: Vec<Subset> = (0..n).map(|x| above[x].with(x)).collect();
        let mut down = vec![Subset::EMPTY; n];
        for x in 0..n {
            for y in up[x].iter() {
                down[y] = down[y].with(x);
            }
        }
        Ok(FiniteSpace { points: names, index, covers, up, down, parents, children })
    }

    pub fn from_file(f: &SpaceFile) -> Result<Self> {
        let covers: Vec<(&str, &str)> = f.covers.iter().map(|[y, x]| (y.as_str(), x.as_str())).collect();
        let points: Vec<&str> = f.points.iter().map(|s| s.as_str()).collect();
        Self::new(&points, &covers)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: SpaceFile = serde_json::from_str(s)?;
        Self::from_file(&f)
    }

    /// Canonical description: points in order, covers sorted by index.
    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            points: self.points.clone(),
            covers: self.covers.iter().map(|&(y, x)| [self.points[y].clone(), self.points[x].clone()]).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("serializable")
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.points
    }

    pub fn name(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownPoint(name.to_string()))
    }

    /// Cover pairs `(y, x)` with `y -> x`, sorted.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn is_cover(&self, y: usize, x: usize) -> bool {
        self.parents[x].contains(y)
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.len())
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.up[a].contains(b)
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Minimal open set containing `x`: `{y : y >= x}`.
    pub fn up(&self, x: usize) -> Subset {
        self.up[x]
    }

    /// Closure of `{x}`: `{y : y <= x}`.
    pub fn down(&self, x: usize) -> Subset {
        self.down[x]
    }

    /// `{y : y -> x}`.
    pub fn cover_parents(&self, x: usize) -> Subset {
        self.parents[x]
    }

    /// `{y : x -> y}`.
    pub fn cover_children(&self, x: usize) -> Subset {
        self.children[x]
    }

    /// All common upper bounds of `x` and `x2`.
    pub fn upper_bounds(&self, x: usize, x2: usize) -> Subset {
        self.up[x].inter(self.up[x2])
    }

    pub fn lower_bounds(&self, x: usize, x2: usize) -> Subset {
        self.down[x].inter(self.down[x2])
    }

    pub fn closure(&self, s: Subset) -> Subset {
        s.iter().fold(Subset::EMPTY, |acc, x| acc.union(self.down[x]))
    }

    pub fn open_hull(&self, s: Subset) -> Subset {
        s.iter().fold(Subset::EMPTY, |acc, x| acc.union(self.up[x]))
    }

    pub fn open_boundary(&self, s: Subset) -> Subset {
        self.open_hull(s).minus(s)
    }

    pub fn closed_boundary(&self, s: Subset) -> Subset {
        self.closure(s).minus(s)
    }

    pub fn is_open(&self, s: Subset) -> bool {
        self.open_hull(s) == s
    }

    pub fn is_closed(&self, s: Subset) -> bool {
        self.closure(s) == s
    }

    /// `s` is relatively open in `y`.
    pub fn is_open_in(&self, s: Subset, y: Subset) -> bool {
        s.is_subset(y) && self.open_hull(s).inter(y) == s
    }

    /// `s` is relatively closed in `y`.
    pub fn is_closed_in(&self, s: Subset, y: Subset) -> bool {
        s.is_subset(y) && self.closure(s).inter(y) == s
    }

    pub fn is_locally_closed(&self, s: Subset) -> bool {
        self.is_open(self.open_boundary(s))
    }

    pub fn locally_closed(&self, s: Subset) -> Result<LocallyClosedSet> {
        if !s.is_subset(self.all()) {
            return Err(Error::UnknownPoint(format!("{s:?}")));
        }
        if !self.is_locally_closed(s) {
            return Err(Error::NotLocallyClosed(self.fmt_subset(s)));
        }
        Ok(LocallyClosedSet { set: s, open_hull: self.open_hull(s), open_boundary: self.open_boundary(s) })
    }

    /// Whether `s` is connected in the subspace topology.
    pub fn is_connected(&self, s: Subset) -> bool {
        let Some(start) = s.first() else { return false };
        let mut seen = Subset::singleton(start);
        let mut stack = vec![start];
        while let Some(a) = stack.pop() {
            let nbrs = self.up[a].union(self.down[a]).inter(s).minus(seen);
            for b in nbrs.iter() {
                seen = seen.with(b);
                stack.push(b);
            }
        }
        seen == s
    }

    /// Connected components of `s`, ordered by lowest member.
    pub fn components(&self, s: Subset) -> Vec<Subset> {
        let mut rest = s;
        let mut out = Vec::new();
        while let Some(start) = rest.first() {
            let mut seen = Subset::singleton(start);
            let mut stack = vec![start];
            while let Some(a) = stack.pop() {
                let nbrs = self.up[a].union(self.down[a]).inter(rest).minus(seen);
                for b in nbrs.iter() {
                    seen = seen.with(b);
                    stack.push(b);
                }
            }
            out.push(seen);
            rest = rest.minus(seen);
        }
        out
    }

    /// Points in an order where every point comes after everything below
    /// it (a linear extension).
    pub fn ascending(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| (self.down[x].len(), x));
        order
    }

    /// All closed subsets of the closed set `within`, increasing by mask.
    pub fn closed_subsets_of(&self, within: Subset) -> Vec<Subset> {
        let order: Vec<usize> = self.ascending().into_iter().filter(|&x| within.contains(x)).collect();
        let mut out = Vec::new();
        self.closed_rec(&order, 0, Subset::EMPTY, &mut out);
        out.sort();
        out
    }

    fn closed_rec(&self, order: &[usize], k: usize, cur: Subset, out: &mut Vec<Subset>) {
        if k == order.len() {
            out.push(cur);
            return;
        }
        let p = order[k];
        self.closed_rec(order, k + 1, cur, out);
        if self.down[p].without(p).is_subset(cur) {
            self.closed_rec(order, k + 1, cur.with(p), out);
        }
    }

    pub fn closed_sets(&self) -> Vec<Subset> {
        self.closed_subsets_of(self.all())
    }

    /// All open subsets, increasing by mask.
    pub fn open_sets(&self) -> Vec<Subset> {
        let all = self.all();
        let mut v: Vec<Subset> = self.closed_sets().into_iter().map(|c| all.minus(c)).collect();
        v.sort();
        v
    }

    /// Every locally closed subset once, ordered by `(size, mask)`.
    pub fn enumerate_lc(&self) -> Vec<LocallyClosedSet> {
        let opens = self.open_sets();
        let mut sets = BTreeSet::new();
        for &u in &opens {
            for &v in &opens {
                if v.is_subset(u) {
                    sets.insert(u.minus(v));
                }
            }
        }
        let mut v: Vec<Subset> = sets.into_iter().collect();
        v.sort_by_key(|s| (s.len(), *s));
        v.into_iter()
            .map(|s| LocallyClosedSet { set: s, open_hull: self.open_hull(s), open_boundary: self.open_boundary(s) })
            .collect()
    }

    /// All paths from `y` down to `x`, as `[y, ..., x]`; `[x]` when equal.
    pub fn paths(&self, y: usize, x: usize) -> Vec<Path> {
        let mut out = Vec::new();
        if !self.leq(x, y) {
            return out;
        }
        let mut cur = vec![y];
        self.paths_rec(x, &mut cur, &mut out);
        out
    }

    fn paths_rec(&self, x: usize, cur: &mut Vec<usize>, out: &mut Vec<Path>) {
        let last = *cur.last().expect("nonempty");
        if last == x {
            out.push(cur.clone());
            return;
        }
        for c in self.children[last].iter() {
            if self.leq(x, c) {
                cur.push(c);
                self.paths_rec(x, cur, out);
                cur.pop();
            }
        }
    }

    /// Ordered pairs of distinct paths ending at `x` with a common source.
    pub fn double_paths(&self, x: usize) -> Vec<(Path, Path)> {
        let mut out = Vec::new();
        for s in self.up[x].iter() {
            let ps = self.paths(s, x);
            for p in &ps {
                for q in &ps {
                    if p != q {
                        out.push((p.clone(), q.clone()));
                    }
                }
            }
        }
        out
    }

    /// Number of paths from `y` to `x`.
    pub fn path_count(&self, y: usize, x: usize) -> u64 {
        if !self.leq(x, y) {
            return 0;
        }
        if x == y {
            return 1;
        }
        self.children[y].iter().filter(|&c| self.leq(x, c)).map(|c| self.path_count(c, x)).sum()
    }

    pub fn fmt_subset(&self, s: Subset) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.name(i)).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn fmt_path(&self, p: &[usize]) -> String {
        let names: Vec<&str> = p.iter().map(|&i| self.name(i)).collect();
        format!("({})", names.join(","))
    }

    /// Comma-joined names in point order (the form used in module keys).
    pub fn join_names(&self, s: Subset) -> String {
        let names: Vec<&str> = s.iter().map(|i| self.name(i)).collect();
        names.join(",")
    }

    /// Inverse of [`join_names`](Self::join_names).
    pub fn parse_names(&self, s: &str) -> Result<Subset> {
        if s.is_empty() {
            return Ok(Subset::EMPTY);
        }
        let mut out = Subset::EMPTY;
        for part in s.split(',') {
            let i = self.index_of(part)?;
            if out.contains(i) {
                return Err(Error::Parse(format!("point {part:?} repeated in {s:?}")));
            }
            out = out.with(i);
        }
        Ok(out)
    }

    /// The locally closed set `s` as a space in its own right, with the
    /// ambient index of each of its points.
    pub fn subspace(&self, s: Subset) -> Result<(FiniteSpace, Vec<usize>)> {
        self.locally_closed(s)?;
        let pts: Vec<usize> = s.iter().collect();
        let names = pts.iter().map(|&p| self.points[p].clone()).collect();
        let local = |g: usize| pts.iter().position(|&p| p == g).expect("member");
        let pairs: Vec<(usize, usize)> =
            self.covers.iter().filter(|&&(y, x)| s.contains(y) && s.contains(x)).map(|&(y, x)| (local(y), local(x))).collect();
        Ok((FiniteSpace::from_indices(names, &pairs)?, pts))
    }

    /// The same poset with points reordered: new point `i` is old point
    /// `perm[i]`, keeping its name.
    pub fn permuted(&self, perm: &[usize]) -> Result<FiniteSpace> {
        assert_eq!(perm.len(), self.len(), "permutation length");
        let mut inv = vec![usize::MAX; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        let names = perm.iter().map(|&p| self.points[p].clone()).collect();
        let pairs: Vec<(usize, usize)> = self.covers.iter().map(|&(y, x)| (inv[y], inv[x])).collect();
        FiniteSpace::from_indices(names, &pairs)
    }
}
