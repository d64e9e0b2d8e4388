//! Interval-stabbing index over polygon edges, answering "does this chord cross
//! any stored chord" in logarithmic time.
//!
//! A stored chord `(u, v)` with `u < v` crosses the query `(x, y)` with `x < y`
//! iff `u ∈ (x, y)` and `v > y`, or `v ∈ (x, y)` and `u < x`. Edges sorted by `u`
//! carry a max-tree over `v`; edges sorted by `v` carry a max-tree over the
//! reversed rank of `u`. New edges go into a linear buffer that is folded into
//! the static part once it grows comparable in size.

use crate::circle::RatAngle;

use super::Class;

#[derive(Clone, Copy, Debug)]
struct Edge {
    u: RatAngle,
    v: RatAngle,
    owner: usize,
}

impl Edge {
    fn crosses(&self, x: RatAngle, y: RatAngle) -> bool {
        (x < self.u && self.u < y && self.v > y) || (x < self.v && self.v < y && self.u < x)
    }
}

/// Max segment tree over `(key, slot)` pairs; key 0 means empty.
#[derive(Clone, Debug, Default)]
struct MaxTree {
    size: usize,
    node: Vec<usize>,
}

impl MaxTree {
    fn build(keys: &[usize]) -> Self {
        let size = keys.len().next_power_of_two().max(1);
        let mut node = vec![0; 2 * size];
        node[size..size + keys.len()].copy_from_slice(keys);
        for i in (1..size).rev() {
            node[i] = node[2 * i].max(node[2 * i + 1]);
        }
        MaxTree { size, node }
    }

    /// Slots in `[lo, hi)` whose key exceeds `threshold`; stops after the first
    /// hit when `first_only`.
    fn collect(&self, lo: usize, hi: usize, threshold: usize, first_only: bool, out: &mut Vec<usize>) {
        if lo >= hi || self.node.is_empty() {
            return;
        }
        self.descend(1, 0, self.size, lo, hi, threshold, first_only, out);
    }

    #[allow(clippy::too_many_arguments)]
    fn descend(
        &self,
        i: usize,
        nlo: usize,
        nhi: usize,
        lo: usize,
        hi: usize,
        threshold: usize,
        first_only: bool,
        out: &mut Vec<usize>,
    ) {
        if nhi <= lo || hi <= nlo || self.node[i] <= threshold || (first_only && !out.is_empty()) {
            return;
        }
        if nhi - nlo == 1 {
            out.push(nlo);
            return;
        }
        let mid = (nlo + nhi) / 2;
        self.descend(2 * i, nlo, mid, lo, hi, threshold, first_only, out);
        self.descend(2 * i + 1, mid, nhi, lo, hi, threshold, first_only, out);
    }
}

#[derive(Clone, Debug, Default)]
pub struct LinkIndex {
    coords: Vec<RatAngle>,
    by_u: Vec<Edge>,
    by_v: Vec<Edge>,
    tree_v: MaxTree,
    tree_u: MaxTree,
    buffer: Vec<Edge>,
}

impl LinkIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Index over the boundary edges of `(owner, class)` pairs.
    pub fn from_classes<'a>(classes: impl IntoIterator<Item = (usize, &'a Class)>) -> Self {
        let mut edges = Vec::new();
        for (owner, c) in classes {
            edges.extend(c.edges().into_iter().map(|(u, v)| Edge { u, v, owner }));
        }
        let mut idx = LinkIndex::new();
        idx.rebuild(edges);
        idx
    }

    fn rebuild(&mut self, mut edges: Vec<Edge>) {
        let mut coords: Vec<RatAngle> = edges.iter().flat_map(|e| [e.u, e.v]).collect();
        coords.sort_unstable();
        coords.dedup();
        let rank = |a: RatAngle| coords.binary_search(&a).expect("coordinate present");
        edges.sort_by(|a, b| a.u.cmp(&b.u).then(a.v.cmp(&b.v)));
        let keys_v: Vec<usize> = edges.iter().map(|e| rank(e.v) + 1).collect();
        let by_u = edges.clone();
        edges.sort_by(|a, b| a.v.cmp(&b.v).then(a.u.cmp(&b.u)));
        let n = coords.len();
        let keys_u: Vec<usize> = edges.iter().map(|e| n - rank(e.u)).collect();
        self.tree_v = MaxTree::build(&keys_v);
        self.tree_u = MaxTree::build(&keys_u);
        self.by_u = by_u;
        self.by_v = edges;
        self.coords = coords;
        self.buffer.clear();
    }

    pub fn len(&self) -> usize {
        self.by_u.len() + self.buffer.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn insert_class(&mut self, owner: usize, class: &Class) {
        self.buffer.extend(
            class
                .edges()
                .into_iter()
                .map(|(u, v)| Edge { u, v, owner }),
        );
        if self.buffer.len() > self.by_u.len().max(256) {
            let mut all = std::mem::take(&mut self.by_u);
            all.append(&mut self.buffer);
            self.rebuild(all);
        }
    }

    fn query(&self, x: RatAngle, y: RatAngle, first_only: bool, out: &mut Vec<usize>) {
        let (x, y) = if x <= y { (x, y) } else { (y, x) };
        let mut slots = Vec::new();
        // u in (x, y), v > y
        let lo = self.by_u.partition_point(|e| e.u <= x);
        let hi = self.by_u.partition_point(|e| e.u < y);
        let t = self.coords.partition_point(|c| *c <= y);
        self.tree_v.collect(lo, hi, t, first_only, &mut slots);
        out.extend(slots.iter().map(|&s| self.by_u[s].owner));
        if first_only && !out.is_empty() {
            return;
        }
        slots.clear();
        // v in (x, y), u < x
        let lo = self.by_v.partition_point(|e| e.v <= x);
        let hi = self.by_v.partition_point(|e| e.v < y);
        let s = self.coords.partition_point(|c| *c < x);
        self.tree_u
            .collect(lo, hi, self.coords.len() - s, first_only, &mut slots);
        out.extend(slots.iter().map(|&s| self.by_v[s].owner));
        if first_only && !out.is_empty() {
            return;
        }
        for e in &self.buffer {
            if e.crosses(x, y) {
                out.push(e.owner);
                if first_only {
                    return;
                }
            }
        }
    }

    /// Owner of some stored edge crossing chord `(x, y)`.
    pub fn first_crossing(&self, x: RatAngle, y: RatAngle) -> Option<usize> {
        let mut out = Vec::new();
        self.query(x, y, true, &mut out);
        out.first().copied()
    }

    /// Owners of all stored edges crossing chord `(x, y)` (with repetition).
    pub fn crossings(&self, x: RatAngle, y: RatAngle) -> Vec<usize> {
        let mut out = Vec::new();
        self.query(x, y, false, &mut out);
        out
    }

    /// Some stored class, other than `skip`, whose boundary crosses the boundary of `class`.
    pub fn linked_owner(&self, class: &Class, skip: Option<usize>) -> Option<usize> {
        for (x, y) in class.edges() {
            if skip.is_none() {
                if let Some(o) = self.first_crossing(x, y) {
                    return Some(o);
                }
            } else if let Some(o) = self.crossings(x, y).into_iter().find(|&o| Some(o) != skip) {
                return Some(o);
            }
        }
        None
    }
}
