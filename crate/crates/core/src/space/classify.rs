use serde::Serialize;

use super::{FiniteSpace, Subset};

/// Space-class flags with witnesses for each failed property.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SpaceClass {
    pub unique_path: bool,
    pub ebp: bool,
    pub accordion: bool,
    pub forest: bool,
    pub witnesses: Vec<SpaceWitness>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceWitness {
    /// Two distinct paths between the same points.
    TwoPaths { from: String, to: String, first: Vec<String>, second: Vec<String> },
    /// An elementary boundary pair not of the form `(up(x), down(y))`.
    NonPointPair { open: Vec<String>, closed: Vec<String> },
    /// The Hasse diagram has an undirected cycle.
    Cycle { edges: usize, components: usize },
    /// The Hasse diagram is not a simple path.
    NotPath { reason: String },
}

impl FiniteSpace {
    fn names_of(&self, s: Subset) -> Vec<String> {
        s.iter().map(|i| self.name(i).to_string()).collect()
    }

    fn path_names(&self, p: &[usize]) -> Vec<String> {
        p.iter().map(|&i| self.name(i).to_string()).collect()
    }

    /// First pair of distinct paths found, scanning sources then targets in
    /// index order.
    pub fn two_paths_witness(&self) -> Option<(usize, usize, Vec<usize>, Vec<usize>)> {
        for y in 0..self.len() {
            for x in 0..self.len() {
                if self.path_count(y, x) > 1 {
                    let ps = self.paths(y, x);
                    return Some((y, x, ps[0].clone(), ps[1].clone()));
                }
            }
        }
        None
    }

    /// At most one path between any two points.
    pub fn unique_path_by_paths(&self) -> bool {
        self.two_paths_witness().is_none()
    }

    /// No `a < b < d`, `a < c < d` with `b`, `c` incomparable.
    pub fn unique_path_by_diamonds(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            for d in 0..n {
                if !self.lt(a, d) {
                    continue;
                }
                let mid: Vec<usize> = (0..n).filter(|&m| self.lt(a, m) && self.lt(m, d)).collect();
                for &b in &mid {
                    for &c in &mid {
                        if !self.comparable(b, c) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    /// `up(x) ∪ down(y)` is locally closed for every arrow `x -> y`.
    pub fn unique_path_by_arrows(&self) -> bool {
        self.covers().iter().all(|&(x, y)| self.is_locally_closed(self.up(x).union(self.down(y))))
    }

    /// `U ∪ C` locally closed, `U` relatively open in it, disjoint.
    pub fn is_boundary_pair(&self, u: Subset, c: Subset) -> bool {
        let y = u.union(c);
        u.is_disjoint(c) && self.is_locally_closed(y) && self.is_open_in(u, y)
    }

    /// Every boundary pair `(U, C)` with `U`, `C` connected, `U ⊆ hull C` and
    /// `C ⊆ closure U` has `(hull U, closure C)` a boundary pair. Dropping the
    /// inclusions breaks trees (`U = {3}`, `C = {4}` in `3 -> 2 -> 1 <- 4`),
    /// dropping connectedness breaks six-point accordions.
    /// Exponential; meant for small spaces.
    pub fn unique_path_by_boundary_pairs(&self) -> bool {
        for lc in self.enumerate_lc() {
            let y = lc.set;
            for u in y.subsets() {
                if !self.is_open_in(u, y) {
                    continue;
                }
                let c = y.minus(u);
                if !self.is_connected(u)
                    || !self.is_connected(c)
                    || !u.is_subset(self.open_hull(c))
                    || !c.is_subset(self.closure(u))
                {
                    continue;
                }
                if !self.is_boundary_pair(self.open_hull(u), self.closure(c)) {
                    return false;
                }
            }
        }
        true
    }

    /// The open boundary of each point is the disjoint union of `up(y)` over
    /// its cover parents.
    pub fn unique_path_by_open_boundaries(&self) -> bool {
        (0..self.len()).all(|x| {
            let parts: Vec<Subset> = self.cover_parents(x).iter().map(|y| self.up(y)).collect();
            disjoint_union_equals(&parts, self.up(x).without(x))
        })
    }

    /// The closed boundary of each point is the disjoint union of `down(y)`
    /// over the points it covers.
    pub fn unique_path_by_closed_boundaries(&self) -> bool {
        (0..self.len()).all(|x| {
            let parts: Vec<Subset> = self.cover_children(x).iter().map(|y| self.down(y)).collect();
            disjoint_union_equals(&parts, self.down(x).without(x))
        })
    }

    /// The six equivalent unique-path conditions, each evaluated on its own.
    pub fn unique_path_conditions(&self) -> [bool; 6] {
        [
            self.unique_path_by_paths(),
            self.unique_path_by_diamonds(),
            self.unique_path_by_arrows(),
            self.unique_path_by_boundary_pairs(),
            self.unique_path_by_open_boundaries(),
            self.unique_path_by_closed_boundaries(),
        ]
    }

    pub fn is_unique_path(&self) -> bool {
        self.unique_path_by_paths()
    }

    /// All elementary boundary pairs, ordered by `(open, closed)` mask.
    pub fn elementary_boundary_pairs(&self) -> Vec<(Subset, Subset)> {
        let mut out = Vec::new();
        for u in self.open_sets() {
            if u.is_empty() || !self.is_connected(u) {
                continue;
            }
            let frame = self.closed_boundary(u);
            for c in self.closed_subsets_of(frame) {
                if c.is_empty() || !self.is_connected(c) {
                    continue;
                }
                if u.is_subset(self.open_hull(c)) && self.is_locally_closed(u.union(c)) {
                    out.push((u, c));
                }
            }
        }
        out
    }

    /// Whether `(u, c)` equals `(up(x), down(y))` for some arrow `x -> y`.
    pub fn is_point_pair(&self, u: Subset, c: Subset) -> bool {
        let x = (0..self.len()).find(|&x| self.up(x) == u);
        let y = (0..self.len()).find(|&y| self.down(y) == c);
        matches!((x, y), (Some(x), Some(y)) if self.is_cover(x, y))
    }

    /// Hasse diagram as an undirected graph: (edge count, component count).
    fn hasse_counts(&self) -> (usize, usize) {
        (self.covers().len(), self.components(self.all()).len())
    }

    pub fn is_forest(&self) -> bool {
        let (e, c) = self.hasse_counts();
        e + c == self.len()
    }

    pub fn is_accordion(&self) -> bool {
        self.accordion_failure().is_none()
    }

    fn accordion_failure(&self) -> Option<String> {
        let n = self.len();
        if n <= 1 {
            return None;
        }
        let (e, c) = self.hasse_counts();
        if c != 1 {
            return Some(format!("Hasse diagram has {c} components"));
        }
        if e != n - 1 {
            return Some("Hasse diagram has a cycle".into());
        }
        for x in 0..n {
            let deg = self.cover_parents(x).len() + self.cover_children(x).len();
            if deg > 2 {
                return Some(format!("point {} has {deg} neighbours", self.name(x)));
            }
        }
        None
    }

    pub fn classify(&self) -> SpaceClass {
        let mut witnesses = Vec::new();
        let unique_path = match self.two_paths_witness() {
            Some((y, x, p, q)) => {
                witnesses.push(SpaceWitness::TwoPaths {
                    from: self.name(y).into(),
                    to: self.name(x).into(),
                    first: self.path_names(&p),
                    second: self.path_names(&q),
                });
                false
            }
            None => true,
        };
        let ebp = unique_path && {
            let bad = self.elementary_boundary_pairs().into_iter().find(|&(u, c)| !self.is_point_pair(u, c));
            match bad {
                Some((u, c)) => {
                    witnesses.push(SpaceWitness::NonPointPair { open: self.names_of(u), closed: self.names_of(c) });
                    false
                }
                None => true,
            }
        };
        let forest = self.is_forest();
        if !forest {
            let (edges, components) = self.hasse_counts();
            witnesses.push(SpaceWitness::Cycle { edges, components });
        }
        let accordion = match self.accordion_failure() {
            Some(reason) => {
                witnesses.push(SpaceWitness::NotPath { reason });
                false
            }
            None => true,
        };
        SpaceClass { unique_path, ebp, accordion, forest, witnesses }
    }
}

fn disjoint_union_equals(parts: &[Subset], target: Subset) -> bool {
    let mut acc = Subset::EMPTY;
    for &p in parts {
        if !acc.is_disjoint(p) {
            return false;
        }
        acc = acc.union(p);
    }
    acc == target
}
