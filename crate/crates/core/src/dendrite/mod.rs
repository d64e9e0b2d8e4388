//! Finite tree models of the quotient dendrite of a lamination.

mod render;
mod tree;

use std::collections::BTreeSet;
use std::fmt;

pub use render::{render_disk_svg, render_tree_svg};
pub use tree::Tree;

use thiserror::Error;

use crate::circle::RatAngle;
use crate::lamination::{Class, ClassId, Lamination};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DendriteError {
    #[error("NOT-A-TREE: {0}")]
    NotATree(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PointKindTag {
    Endpoint,
    Cutpoint,
    Branchpoint,
}

impl fmt::Display for PointKindTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKindTag::Endpoint => "endpoint",
            PointKindTag::Cutpoint => "cutpoint",
            PointKindTag::Branchpoint => "branchpoint",
        })
    }
}

/// Valence of the quotient point of a class: one complementary component per hole.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PointKind {
    pub kind: PointKindTag,
    pub valence: usize,
}

pub fn point_kind(c: &Class) -> PointKind {
    let valence = c.len();
    let kind = match valence {
        1 => PointKindTag::Endpoint,
        2 => PointKindTag::Cutpoint,
        _ => PointKindTag::Branchpoint,
    };
    PointKind { kind, valence }
}

/// A self-map on some of the vertices of a finite tree.
pub trait TreeMap {
    fn tree(&self) -> &Tree;
    /// Image vertex, or `None` when it lies beyond the stored data.
    fn image(&self, v: usize) -> Option<usize>;
    fn is_cutpoint(&self, v: usize) -> bool;
    fn label(&self, v: usize) -> String;
}

/// A tree map given by explicit vertex images, for hand-built examples.
#[derive(Clone, Debug)]
pub struct VertexMap {
    pub tree: Tree,
    pub images: Vec<Option<usize>>,
    pub labels: Vec<String>,
}

impl TreeMap for VertexMap {
    fn tree(&self) -> &Tree {
        &self.tree
    }

    fn image(&self, v: usize) -> Option<usize> {
        self.images[v]
    }

    fn is_cutpoint(&self, v: usize) -> bool {
        self.tree.degree(v) >= 2
    }

    fn label(&self, v: usize) -> String {
        self.labels[v].clone()
    }
}

/// The classes of a lamination as the vertices of a tree, with the induced map.
#[derive(Clone, Debug)]
pub struct DendriteApprox {
    lamination: Lamination,
    tree: Tree,
}

/// Builds the quotient tree: two classes are adjacent when no third stored class
/// separates them.
///
/// Adjacency is read off the complementary regions of the class hulls in the
/// disk. Walking a region's boundary counterclockwise, the arc ending at angle
/// `x` continues along the hull of the class of `x` back to the predecessor of
/// `x` in that class. Each region must touch exactly two classes.
pub fn build_dendrite(lam: &Lamination) -> Result<DendriteApprox, DendriteError> {
    let mut pts: Vec<(RatAngle, ClassId)> = Vec::new();
    for id in 0..lam.len() {
        for &a in lam.class(id).angles() {
            if lam.class_of_angle(a) != Some(id) {
                return Err(DendriteError::NotATree(format!(
                    "angle {a} lies in two classes"
                )));
            }
            pts.push((a, id));
        }
    }
    pts.sort_unstable();
    let n = pts.len();
    let pos = |a: RatAngle| pts.binary_search_by(|p| p.0.cmp(&a)).expect("stored angle");
    let mut visited = vec![false; n];
    let mut edges = BTreeSet::new();
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut boundary = BTreeSet::new();
        let mut cur = start;
        loop {
            visited[cur] = true;
            let (x, k) = pts[(cur + 1) % n];
            boundary.insert(pts[cur].1);
            boundary.insert(k);
            let p = lam.class(k).predecessor(x).expect("member angle");
            cur = pos(p);
            if cur == start {
                break;
            }
        }
        match boundary.len() {
            1 => {}
            2 => {
                let mut it = boundary.iter();
                let (a, b) = (*it.next().unwrap(), *it.next().unwrap());
                if !edges.insert((a, b)) {
                    return Err(DendriteError::NotATree(format!(
                        "{} and {} bound two regions",
                        lam.class(a),
                        lam.class(b)
                    )));
                }
            }
            _ => {
                let names: Vec<String> = boundary.iter().map(|&c| lam.class(c).to_string()).collect();
                return Err(DendriteError::NotATree(format!(
                    "region bounded by {} classes without a separating class: {}",
                    names.len(),
                    names.join(" ")
                )));
            }
        }
    }
    let edges: Vec<(usize, usize)> = edges.into_iter().collect();
    let tree = Tree::new(lam.len(), &edges)?;
    Ok(DendriteApprox {
        lamination: lam.clone(),
        tree,
    })
}

impl DendriteApprox {
    pub fn lamination(&self) -> &Lamination {
        &self.lamination
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn len(&self) -> usize {
        self.tree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tree.is_empty()
    }

    pub fn class(&self, v: ClassId) -> &Class {
        self.lamination.class(v)
    }

    pub fn vertex_of(&self, c: &Class) -> Option<ClassId> {
        self.lamination.find(c)
    }

    pub fn image(&self, v: ClassId) -> Option<ClassId> {
        self.lamination.image(v)
    }

    pub fn is_frontier(&self, v: ClassId) -> bool {
        self.image(v).is_none()
    }

    pub fn point_kind(&self, v: ClassId) -> PointKind {
        point_kind(self.class(v))
    }

    /// The tree path from `u` to `v`, both included.
    pub fn arc_between(&self, u: ClassId, v: ClassId) -> Vec<ClassId> {
        self.tree.path(u, v)
    }

    /// Tree separation: removing `x` disconnects `y` from `z`.
    pub fn separates(&self, x: ClassId, y: ClassId, z: ClassId) -> bool {
        self.tree.separates(x, y, z)
    }

    /// Circle separation: `y` and `z` lie in different holes of `x`.
    pub fn separates_by_holes(&self, x: ClassId, y: ClassId, z: ClassId) -> bool {
        x != y && x != z && self.class(x).separates(self.class(y), self.class(z))
    }

    /// Line-oriented export: one `class; kind; valence; depth; image` line per
    /// vertex, then one `class -- class` line per edge.
    pub fn export_text(&self) -> String {
        let mut out = String::new();
        for v in 0..self.len() {
            let pk = self.point_kind(v);
            let image = match self.image(v) {
                Some(w) => self.class(w).to_string(),
                None => "FRONTIER".to_string(),
            };
            out.push_str(&format!(
                "{}; {}; {}; {}; {}\n",
                self.class(v),
                pk.kind,
                pk.valence,
                self.lamination.class_depth(v),
                image
            ));
        }
        for (a, b) in self.tree.edges() {
            out.push_str(&format!("{} -- {}\n", self.class(a), self.class(b)));
        }
        out
    }
}

impl TreeMap for DendriteApprox {
    fn tree(&self) -> &Tree {
        &self.tree
    }

    fn image(&self, v: usize) -> Option<usize> {
        self.lamination.image(v)
    }

    fn is_cutpoint(&self, v: usize) -> bool {
        self.class(v).len() >= 2
    }

    fn label(&self, v: usize) -> String {
        self.class(v).to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::pullback_closure;

    fn c(s: &str) -> Class {
        s.parse().unwrap()
    }

    fn dendrite(depth: u32) -> DendriteApprox {
        let lam = pullback_closure(2, &[c("{1/12,7/12}"), c("{1/7,2/7,4/7}")], depth).unwrap();
        build_dendrite(&lam).unwrap()
    }

    #[test]
    fn point_kinds() {
        assert_eq!(point_kind(&c("{1/6}")).kind, PointKindTag::Endpoint);
        assert_eq!(point_kind(&c("{1/12,7/12}")).valence, 2);
        assert_eq!(point_kind(&c("{1/7,2/7,4/7}")).kind, PointKindTag::Branchpoint);
    }

    #[test]
    fn single_class() {
        let lam = pullback_closure(2, &[c("{0}")], 0).unwrap();
        let d = build_dendrite(&lam).unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.tree().edges().is_empty());
    }

    #[test]
    fn forward_closure_tree() {
        let d = dendrite(0);
        let v = |s: &str| d.vertex_of(&c(s)).unwrap();
        let edges: BTreeSet<(usize, usize)> = d.tree().edges().into_iter().collect();
        let expect = [
            ("{2/3}", "{1/12,7/12}"),
            ("{1/12,7/12}", "{1/7,2/7,4/7}"),
            ("{1/7,2/7,4/7}", "{1/6}"),
            ("{1/7,2/7,4/7}", "{1/3}"),
        ];
        for (a, b) in expect {
            let (x, y) = (v(a), v(b));
            assert!(edges.contains(&(x.min(y), x.max(y))), "{a} -- {b}");
        }
        assert_eq!(edges.len(), 4);
    }

    #[test]
    fn forward_closure_of_critical_leaf_alone_is_not_a_tree() {
        let lam = pullback_closure(2, &[c("{1/12,7/12}")], 0).unwrap();
        assert!(matches!(build_dendrite(&lam), Err(DendriteError::NotATree(_))));
    }

    #[test]
    fn triangle_is_a_branchpoint_of_the_tree() {
        let d = dendrite(6);
        let t = d.vertex_of(&c("{1/7,2/7,4/7}")).unwrap();
        assert_eq!(d.tree().degree(t), 3);
        let (a, b) = (d.vertex_of(&c("{1/6}")).unwrap(), d.vertex_of(&c("{2/3}")).unwrap());
        let path = d.arc_between(a, b);
        for &w in &path[1..path.len() - 1] {
            assert!(d.separates_by_holes(w, a, b));
        }
        let crit = d.vertex_of(&c("{1/12,7/12}")).unwrap();
        let third = d.vertex_of(&c("{1/3}")).unwrap();
        assert!(d.separates_by_holes(crit, a, b));
        assert!(!d.separates_by_holes(crit, a, third));
    }

    #[test]
    fn export_lists_vertices_and_edges() {
        let d = dendrite(1);
        let text = d.export_text();
        assert!(text.contains("{1/7,2/7,4/7}; branchpoint; 3; 0; {1/7,2/7,4/7}\n"));
        assert!(text.contains("{1/6}; endpoint; 1; 0; {1/3}\n"));
        assert_eq!(text.lines().filter(|l| l.contains(" -- ")).count(), d.len() - 1);
    }
}
