use std::collections::VecDeque;

use super::DendriteError;

/// A finite tree on vertices `0..n`, rooted at 0 for path queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    adj: Vec<Vec<usize>>,
    parent: Vec<usize>,
    level: Vec<usize>,
}

impl Tree {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self, DendriteError> {
        if n > 0 && edges.len() != n - 1 {
            return Err(DendriteError::NotATree(format!(
                "{} edges on {n} vertices",
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(DendriteError::NotATree(format!("bad edge ({a}, {b})")));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let (parent, level, seen) = bfs(&adj, 0);
        if n > 0 && seen != n {
            return Err(DendriteError::NotATree(format!(
                "disconnected: {seen} of {n} vertices reachable"
            )));
        }
        Ok(Tree { adj, parent, level })
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|a| self.adj[a].iter().filter(move |&&b| a < b).map(move |&b| (a, b)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Distance from the root in edges.
    pub fn level(&self, v: usize) -> usize {
        self.level[v]
    }

    /// The unique path from `u` to `v`, both included.
    pub fn path(&self, u: usize, v: usize) -> Vec<usize> {
        let (mut a, mut b) = (u, v);
        let mut left = Vec::new();
        let mut right = Vec::new();
        while self.level[a] > self.level[b] {
            left.push(a);
            a = self.parent[a];
        }
        while self.level[b] > self.level[a] {
            right.push(b);
            b = self.parent[b];
        }
        while a != b {
            left.push(a);
            right.push(b);
            a = self.parent[a];
            b = self.parent[b];
        }
        left.push(a);
        left.extend(right.into_iter().rev());
        left
    }

    /// Number of edges between `u` and `v`.
    pub fn distance(&self, u: usize, v: usize) -> usize {
        self.path(u, v).len() - 1
    }

    /// The neighbor of `from` on the path to `to`.
    pub fn step_toward(&self, from: usize, to: usize) -> Option<usize> {
        if from == to {
            return None;
        }
        self.path(from, to).get(1).copied()
    }

    /// Whether removing `x` disconnects `y` from `z`.
    pub fn separates(&self, x: usize, y: usize, z: usize) -> bool {
        if x == y || x == z || y == z {
            return false;
        }
        let p = self.path(y, z);
        p[1..p.len() - 1].contains(&x)
    }

    /// The smallest subtree containing every vertex of `set`.
    pub fn hull(&self, set: &[usize]) -> Vec<bool> {
        let n = self.len();
        let mut member = vec![false; n];
        let Some(&root) = set.first() else {
            return member;
        };
        for &s in set {
            member[s] = true;
        }
        let (parent, _, _) = bfs(&self.adj, root);
        let order = bfs_order(&self.adj, root);
        let mut has = member.clone();
        for &v in order.iter().rev() {
            if v != root && has[v] {
                has[parent[v]] = true;
            }
        }
        has
    }

    /// Vertices reachable from `start` without passing through `removed`.
    pub fn component_without(&self, removed: usize, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        if start == removed {
            return seen;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if w != removed && !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen
    }
}

fn bfs(adj: &[Vec<usize>], root: usize) -> (Vec<usize>, Vec<usize>, usize) {
    let n = adj.len();
    let mut parent = vec![usize::MAX; n];
    let mut level = vec![usize::MAX; n];
    if n == 0 {
        return (parent, level, 0);
    }
    parent[root] = root;
    level[root] = 0;
    let mut seen = 1;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if level[w] == usize::MAX {
                level[w] = level[v] + 1;
                parent[w] = v;
                seen += 1;
                queue.push_back(w);
            }
        }
    }
    (parent, level, seen)
}

fn bfs_order(adj: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    seen[root] = true;
    let mut order = vec![root];
    let mut i = 0;
    while i < order.len() {
        let v = order[i];
        i += 1;
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                order.push(w);
            }
        }
    }
    order
}
