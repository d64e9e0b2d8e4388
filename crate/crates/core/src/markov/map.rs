use std::fmt;

use num_traits::{One, Zero};

use super::{MarkovError, Rat};
use crate::dendrite::{Tree, TreeMap};
use crate::par::Exec;

/// Compositions with more pieces than this are refused.
pub(super) const PIECE_CAP: usize = 1 << 20;

/// A point of the tree: a vertex, or an edge with a parameter strictly inside
/// `(0, 1)`, measured from the first endpoint of the edge.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Vertex(usize),
    Edge(usize, Rat),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(v) => write!(f, "v{v}"),
            Point::Edge(e, t) => write!(f, "e{e}@{t}"),
        }
    }
}

/// One linear piece: parameters `[s0, s1]` of `edge` go linearly onto the
/// parameters from `t0` to `t1` of `image_edge`. `t0 == t1` is a constant piece.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub edge: usize,
    pub s0: Rat,
    pub s1: Rat,
    pub image_edge: usize,
    pub t0: Rat,
    pub t1: Rat,
}

impl Piece {
    /// Slope in edge parameters.
    pub fn slope(&self) -> Rat {
        (&self.t1 - &self.t0) / (&self.s1 - &self.s0)
    }

    pub fn is_constant(&self) -> bool {
        self.t0 == self.t1
    }

    pub(super) fn at(&self, s: &Rat) -> Rat {
        if s == &self.s0 {
            return self.t0.clone();
        }
        if s == &self.s1 {
            return self.t1.clone();
        }
        &self.t0 + (s - &self.s0) * self.slope()
    }
}

/// A continuous self-map of a finite tree, linear on finitely many pieces of
/// each edge with exact rational data. Interval maps carry vertex coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkovTreeMap {
    tree: Tree,
    edges: Vec<(usize, usize)>,
    coordinates: Option<Vec<Rat>>,
    pieces: Vec<Piece>,
    /// Pieces of edge `e` are `pieces[starts[e]..starts[e + 1]]`.
    starts: Vec<usize>,
}

impl MarkovTreeMap {
    /// Validates the pieces: they tile every edge and the map is continuous at
    /// every breakpoint and vertex. With coordinates, the tree must be the path
    /// with edges `(i, i + 1)` and the coordinates strictly increasing.
    pub fn new(
        vertices: usize,
        edges: Vec<(usize, usize)>,
        coordinates: Option<Vec<Rat>>,
        mut pieces: Vec<Piece>,
    ) -> Result<Self, MarkovError> {
        if edges.is_empty() {
            return Err(MarkovError::Invalid("the tree needs at least one edge".into()));
        }
        let tree = Tree::new(vertices, &edges)?;
        if let Some(xs) = &coordinates {
            if xs.len() != vertices {
                return Err(MarkovError::Invalid(format!(
                    "{} coordinates for {vertices} vertices",
                    xs.len()
                )));
            }
            if edges.iter().enumerate().any(|(i, &e)| e != (i, i + 1)) {
                return Err(MarkovError::NotAnInterval(
                    "edges must be (0, 1), (1, 2), ...".into(),
                ));
            }
            if xs.windows(2).any(|w| w[0] >= w[1]) {
                return Err(MarkovError::NotAnInterval(
                    "coordinates must increase".into(),
                ));
            }
        }
        let m = edges.len();
        let unit = Rat::one();
        let zero = Rat::zero();
        for p in &pieces {
            if p.edge >= m || p.image_edge >= m {
                return Err(MarkovError::Invalid(format!("edge out of range in piece on e{}", p.edge)));
            }
            if !(zero <= p.s0 && p.s0 < p.s1 && p.s1 <= unit) {
                return Err(MarkovError::Invalid(format!(
                    "domain [{}, {}] on e{} is not a subinterval of [0, 1]",
                    p.s0, p.s1, p.edge
                )));
            }
            for t in [&p.t0, &p.t1] {
                if !(&zero <= t && t <= &unit) {
                    return Err(MarkovError::Invalid(format!(
                        "image parameter {t} on e{} outside [0, 1]",
                        p.image_edge
                    )));
                }
            }
        }
        pieces.sort_by(|a, b| (a.edge, &a.s0).cmp(&(b.edge, &b.s0)));
        let mut starts = vec![0; m + 1];
        for p in &pieces {
            starts[p.edge + 1] += 1;
        }
        for e in 0..m {
            starts[e + 1] += starts[e];
        }
        let map = MarkovTreeMap {
            tree,
            edges,
            coordinates,
            pieces,
            starts,
        };
        map.check_tiling()?;
        map.check_continuity()?;
        Ok(map)
    }

    fn check_tiling(&self) -> Result<(), MarkovError> {
        for e in 0..self.edges.len() {
            let ps = self.edge_pieces(e);
            let mut at = Rat::zero();
            for p in ps {
                if p.s0 != at {
                    return Err(MarkovError::Invalid(format!("e{e} is not covered near {at}")));
                }
                at = p.s1.clone();
            }
            if !at.is_one() {
                return Err(MarkovError::Invalid(format!("e{e} is not covered near {at}")));
            }
        }
        Ok(())
    }

    fn check_continuity(&self) -> Result<(), MarkovError> {
        for e in 0..self.edges.len() {
            for w in self.edge_pieces(e).windows(2) {
                let left = self.point(w[0].image_edge, w[0].t1.clone());
                let right = self.point(w[1].image_edge, w[1].t0.clone());
                if left != right {
                    return Err(MarkovError::Discontinuous(format!("e{e}@{}", w[0].s1)));
                }
            }
        }
        for v in 0..self.tree.len() {
            let mut image: Option<Point> = None;
            for (e, &(a, b)) in self.edges.iter().enumerate() {
                let end = if a == v {
                    let p = &self.edge_pieces(e)[0];
                    self.point(p.image_edge, p.t0.clone())
                } else if b == v {
                    let p = self.edge_pieces(e).last().expect("tiled edge");
                    self.point(p.image_edge, p.t1.clone())
                } else {
                    continue;
                };
                match &image {
                    None => image = Some(end),
                    Some(q) if *q != end => {
                        return Err(MarkovError::Discontinuous(format!("v{v}")));
                    }
                    _ => {}
                }
            }
        }
        Ok(())
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn coordinates(&self) -> Option<&[Rat]> {
        self.coordinates.as_deref()
    }

    pub fn is_interval(&self) -> bool {
        self.coordinates.is_some()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn edge_pieces(&self, e: usize) -> &[Piece] {
        &self.pieces[self.starts[e]..self.starts[e + 1]]
    }

    /// Canonical point with parameter `t` on edge `e`.
    pub fn point(&self, e: usize, t: Rat) -> Point {
        if t.is_zero() {
            Point::Vertex(self.edges[e].0)
        } else if t.is_one() {
            Point::Vertex(self.edges[e].1)
        } else {
            Point::Edge(e, t)
        }
    }

    /// An edge and parameter for `p`; a vertex uses its lowest incident edge.
    pub fn edge_param(&self, p: &Point) -> (usize, Rat) {
        match p {
            Point::Edge(e, t) => (*e, t.clone()),
            Point::Vertex(v) => {
                let (e, &(a, _)) = self
                    .edges
                    .iter()
                    .enumerate()
                    .find(|(_, &(a, b))| a == *v || b == *v)
                    .expect("every vertex has an edge");
                (e, if a == *v { Rat::zero() } else { Rat::one() })
            }
        }
    }

    fn piece_at(&self, e: usize, s: &Rat) -> &Piece {
        let ps = self.edge_pieces(e);
        let i = ps.partition_point(|p| &p.s1 < s);
        &ps[i.min(ps.len() - 1)]
    }

    pub fn eval(&self, p: &Point) -> Point {
        let (e, s) = self.edge_param(p);
        let piece = self.piece_at(e, &s);
        self.point(piece.image_edge, piece.at(&s))
    }

    pub fn coordinate(&self, p: &Point) -> Option<Rat> {
        let xs = self.coordinates.as_ref()?;
        Some(match p {
            Point::Vertex(v) => xs[*v].clone(),
            Point::Edge(e, t) => &xs[*e] + t * (&xs[*e + 1] - &xs[*e]),
        })
    }

    /// The point at coordinate `x` of an interval map, if `x` lies in the interval.
    pub fn at_coordinate(&self, x: &Rat) -> Option<Point> {
        let xs = self.coordinates.as_ref()?;
        if x < &xs[0] || x > xs.last()? {
            return None;
        }
        let i = xs.partition_point(|c| c < x);
        if &xs[i] == x {
            return Some(Point::Vertex(i));
        }
        let e = i - 1;
        Some(Point::Edge(e, (x - &xs[e]) / (&xs[e + 1] - &xs[e])))
    }

    pub fn eval_coordinate(&self, x: &Rat) -> Option<Rat> {
        let p = self.at_coordinate(x)?;
        self.coordinate(&self.eval(&p))
    }

    /// The image of a vertex, when it is a vertex.
    pub fn vertex_image(&self, v: usize) -> Option<usize> {
        match self.eval(&Point::Vertex(v)) {
            Point::Vertex(w) => Some(w),
            Point::Edge(..) => None,
        }
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &MarkovTreeMap, exec: Exec) -> Result<MarkovTreeMap, MarkovError> {
        self.compose_capped(inner, exec, PIECE_CAP)
    }

    /// [`compose`](Self::compose) with a custom cap on the number of pieces,
    /// checked before any piece is built.
    pub fn compose_capped(
        &self,
        inner: &MarkovTreeMap,
        exec: Exec,
        cap: usize,
    ) -> Result<MarkovTreeMap, MarkovError> {
        if self.edges != inner.edges {
            return Err(MarkovError::Invalid("composing maps of different trees".into()));
        }
        let estimate: usize = inner.pieces.iter().map(|g| self.overlaps(g)).sum();
        if estimate > cap {
            return Err(MarkovError::BoundExceeded(format!(
                "composition has {estimate} pieces, the cap is {cap}"
            )));
        }
        let parts = exec.map(&inner.pieces, |g| self.compose_piece(g));
        let total: usize = parts.iter().map(Vec::len).sum();
        let mut pieces: Vec<Piece> = Vec::with_capacity(total);
        for p in parts.into_iter().flatten() {
            match pieces.last_mut() {
                Some(q) if mergeable(q, &p) => q.s1 = p.s1,
                _ => pieces.push(p),
            }
        }
        let starts = inner.starts_for(&pieces);
        Ok(MarkovTreeMap {
            tree: self.tree.clone(),
            edges: self.edges.clone(),
            coordinates: self.coordinates.clone(),
            pieces,
            starts,
        })
    }

    fn starts_for(&self, pieces: &[Piece]) -> Vec<usize> {
        let mut starts = vec![0; self.edges.len() + 1];
        for p in pieces {
            starts[p.edge + 1] += 1;
        }
        for e in 0..self.edges.len() {
            starts[e + 1] += starts[e];
        }
        starts
    }

    /// Number of pieces of `self` over the image of `g`.
    fn overlaps(&self, g: &Piece) -> usize {
        if g.is_constant() {
            return 1;
        }
        let (lo, hi) = if g.t0 < g.t1 { (&g.t0, &g.t1) } else { (&g.t1, &g.t0) };
        let ps = self.edge_pieces(g.image_edge);
        let first = ps.partition_point(|p| &p.s1 <= lo);
        let end = ps.partition_point(|p| &p.s0 < hi);
        end.saturating_sub(first)
    }

    /// Pieces of `self ∘ g` over the domain of `g`, in increasing order.
    fn compose_piece(&self, g: &Piece) -> Vec<Piece> {
        if g.is_constant() {
            let y = self.point(g.image_edge, g.t0.clone());
            let (e, t) = self.edge_param(&self.eval(&y));
            return vec![Piece {
                edge: g.edge,
                s0: g.s0.clone(),
                s1: g.s1.clone(),
                image_edge: e,
                t0: t.clone(),
                t1: t,
            }];
        }
        let increasing = g.t0 < g.t1;
        let (lo, hi) = if increasing {
            (&g.t0, &g.t1)
        } else {
            (&g.t1, &g.t0)
        };
        let back = |t: &Rat| &g.s0 + (t - &g.t0) * (&g.s1 - &g.s0) / (&g.t1 - &g.t0);
        let mut out = Vec::new();
        for f in self.edge_pieces(g.image_edge) {
            if &f.s1 <= lo || &f.s0 >= hi {
                continue;
            }
            let a = if &f.s0 > lo { f.s0.clone() } else { lo.clone() };
            let b = if &f.s1 < hi { f.s1.clone() } else { hi.clone() };
            let (fa, fb) = (f.at(&a), f.at(&b));
            let (sa, sb) = (back(&a), back(&b));
            out.push(if increasing {
                Piece {
                    edge: g.edge,
                    s0: sa,
                    s1: sb,
                    image_edge: f.image_edge,
                    t0: fa,
                    t1: fb,
                }
            } else {
                Piece {
                    edge: g.edge,
                    s0: sb,
                    s1: sa,
                    image_edge: f.image_edge,
                    t0: fb,
                    t1: fa,
                }
            });
        }
        if !increasing {
            out.reverse();
        }
        out
    }
}

fn mergeable(q: &Piece, p: &Piece) -> bool {
    q.edge == p.edge
        && q.s1 == p.s0
        && q.image_edge == p.image_edge
        && q.t1 == p.t0
        && q.slope() == p.slope()
}

impl TreeMap for MarkovTreeMap {
    fn tree(&self) -> &Tree {
        &self.tree
    }

    fn image(&self, v: usize) -> Option<usize> {
        self.vertex_image(v)
    }

    fn is_cutpoint(&self, v: usize) -> bool {
        self.tree.degree(v) >= 2
    }

    fn label(&self, v: usize) -> String {
        format!("v{v}")
    }
}
