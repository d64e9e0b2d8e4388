//! Independent brute-force oracles shared by the integration suites.

#![allow(dead_code)]

use std::collections::BTreeSet;

use laminar::circle::{chords_linked, Chord, Precision};
use laminar::dendrite::DendriteApprox;
use laminar::lamination::{Class, Lamination};
use laminar::markov::MarkovTreeMap;
use num_traits::ToPrimitive;

pub fn class(s: &str) -> Class {
    s.parse().unwrap()
}

/// The lamination generated by the critical leaf `{1/12,7/12}` and the fixed
/// triangle `{1/7,2/7,4/7}`.
pub fn misiurewicz(depth: u32) -> Lamination {
    laminar::lamination::pullback_closure(2, &[class("{1/12,7/12}"), class("{1/7,2/7,4/7}")], depth)
        .unwrap()
}

/// Every leaf vertical: generated by `{1/4,3/4}` and `{1/3,2/3}`.
pub fn chebyshev(depth: u32) -> Lamination {
    laminar::lamination::pullback_closure(2, &[class("{1/4,3/4}"), class("{1/3,2/3}")], depth)
        .unwrap()
}

/// Pairs of stored classes with crossing hull edges, by scanning every pair of
/// edges of every pair of classes.
pub fn linked_pairs(lam: &Lamination) -> Vec<(usize, usize)> {
    let edges: Vec<Vec<Chord<_>>> = (0..lam.len())
        .map(|i| {
            lam.class(i)
                .edges()
                .into_iter()
                .map(|(a, b)| Chord::new(a, b))
                .collect()
        })
        .collect();
    let mut out = Vec::new();
    for i in 0..lam.len() {
        for j in i + 1..lam.len() {
            let crossed = edges[i].iter().any(|p| {
                edges[j]
                    .iter()
                    .any(|q| chords_linked(p, q, Precision::default()).unwrap())
            });
            if crossed {
                out.push((i, j));
            }
        }
    }
    out
}

/// Tree edges by the separation rule: `u` and `v` are adjacent when no third
/// class has them in different holes.
pub fn separation_edges(d: &DendriteApprox) -> BTreeSet<(usize, usize)> {
    let n = d.len();
    let mut out = BTreeSet::new();
    for u in 0..n {
        for v in u + 1..n {
            if !(0..n).any(|w| d.separates_by_holes(w, u, v)) {
                out.insert((u, v));
            }
        }
    }
    out
}

/// Classes visited in the second half of `steps` iterations of the class map.
pub fn cycle_by_iteration(c: &Class, d: u32, steps: usize) -> BTreeSet<Class> {
    let mut cur = c.clone();
    let mut out = BTreeSet::new();
    for i in 0..steps {
        if i >= steps / 2 {
            out.insert(cur.clone());
        }
        cur = cur.image(d);
    }
    out
}

/// The graph of an interval map with vertex images at vertices, in floating point.
pub struct FloatGraph {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl FloatGraph {
    pub fn of(f: &MarkovTreeMap) -> Self {
        let coords = f.coordinates().expect("interval map");
        let xs: Vec<f64> = coords.iter().map(|x| x.to_f64().unwrap()).collect();
        let ys = (0..xs.len())
            .map(|v| {
                let w = f.vertex_image(v).expect("vertex images are vertices");
                xs[w]
            })
            .collect();
        FloatGraph { xs, ys }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self
            .xs
            .partition_point(|&c| c <= x)
            .clamp(1, self.xs.len() - 1)
            - 1;
        let t = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i]);
        self.ys[i] + t * (self.ys[i + 1] - self.ys[i])
    }

    fn max_slope(&self) -> f64 {
        (0..self.xs.len() - 1)
            .map(|i| ((self.ys[i + 1] - self.ys[i]) / (self.xs[i + 1] - self.xs[i])).abs())
            .fold(0.0, f64::max)
    }

    /// Roots of `f^p(x) = x` by branch and bound: a cell is discarded when
    /// `|g(a)| + |g(b)|` exceeds the Lipschitz bound of `g = f^p - id` times
    /// its width, and kept cells are halved down to `1e-13`.
    pub fn roots(&self, p: u32) -> Vec<f64> {
        let g = |x: f64| (0..p).fold(x, |y, _| self.eval(y)) - x;
        let lip = self.max_slope().max(1.0).powi(p as i32) + 1.0;
        let (lo, hi) = (self.xs[0], *self.xs.last().unwrap());
        let cells = 1024;
        let h = (hi - lo) / cells as f64;
        let mut stack: Vec<(f64, f64, f64, f64)> = (0..cells)
            .map(|i| {
                let a = lo + h * i as f64;
                let b = if i + 1 == cells { hi } else { a + h };
                (a, b, g(a), g(b))
            })
            .collect();
        let mut leaves: Vec<(f64, f64)> = Vec::new();
        while let Some((a, b, ga, gb)) = stack.pop() {
            if ga.abs() + gb.abs() > lip * (b - a) + 1e-11 {
                continue;
            }
            if b - a < 1e-13 {
                leaves.push((a, ga.abs()));
                leaves.push((b, gb.abs()));
                continue;
            }
            let m = 0.5 * (a + b);
            let gm = g(m);
            stack.push((a, m, ga, gm));
            stack.push((m, b, gm, gb));
        }
        leaves.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut roots: Vec<(f64, f64)> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for (x, gx) in leaves {
            if x - last > 1e-9 {
                roots.push((x, gx));
            } else {
                let r = roots.last_mut().unwrap();
                if gx < r.1 {
                    *r = (x, gx);
                }
            }
            last = x;
        }
        roots.into_iter().map(|(x, _)| x).collect()
    }
}

/// Compares exact fixed points of `f^p` with the branch-and-bound roots: same
/// count, and each exact root within `tol` of its partner.
pub fn roots_agree(exact: &[f64], approx: &[f64], tol: f64) -> Result<(), String> {
    if exact.len() != approx.len() {
        return Err(format!("{} exact roots, {} by bisection", exact.len(), approx.len()));
    }
    for (x, y) in exact.iter().zip(approx) {
        if (x - y).abs() > tol {
            return Err(format!("root {x} vs {y}"));
        }
    }
    Ok(())
}

/// Whether `m ≻ n`, written out case by case: odd parts above one first, by
/// power of two and then odd part; then `2^∞`; then powers of two downwards.
/// `None` is `2^∞`.
pub fn precedes(m: Option<u64>, n: Option<u64>) -> bool {
    let split = |x: u64| (x.trailing_zeros(), x >> x.trailing_zeros());
    match (m, n) {
        (None, None) => false,
        (None, Some(n)) => n.is_power_of_two(),
        (Some(m), None) => !m.is_power_of_two(),
        (Some(m), Some(n)) => {
            let ((a, p), (b, q)) = (split(m), split(n));
            match (p == 1, q == 1) {
                (true, true) => a > b,
                (true, false) => false,
                (false, true) => true,
                (false, false) => {
                    if a != b {
                        a < b
                    } else {
                        p < q
                    }
                }
            }
        }
    }
}

/// Coordinates of the fixed points of `f^p`, or `None` when `f^p` fixes a segment.
pub fn exact_roots(f: &MarkovTreeMap, p: u32) -> Option<Vec<f64>> {
    let fp = laminar::markov::iterates(f, p, laminar::Exec::Sequential)
        .unwrap()
        .pop()
        .unwrap();
    let fix = laminar::markov::fixed_points(&fp);
    if !fix.is_finite() {
        return None;
    }
    let mut xs: Vec<f64> = fix
        .points
        .iter()
        .map(|q| f.coordinate(q).unwrap().to_f64().unwrap())
        .collect();
    xs.sort_by(f64::total_cmp);
    Some(xs)
}
