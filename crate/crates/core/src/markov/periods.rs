use std::collections::BTreeSet;

use num_traits::{One, Zero};
use serde::Serialize;

use super::{sh_set_contains, MarkovError, MarkovTreeMap, Point, Rat, SharkType};
use crate::par::Exec;

/// Largest period bound accepted by [`exact_periods`].
pub const MAX_PERIOD_BOUND: u32 = 16;

/// Fixed points of a map: isolated points and segments `(edge, a, b)` of edge
/// parameters on which the map is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FixSet {
    pub points: BTreeSet<Point>,
    pub segments: Vec<(usize, Rat, Rat)>,
}

impl FixSet {
    pub fn is_finite(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn contains(&self, f: &MarkovTreeMap, p: &Point) -> bool {
        if self.points.contains(p) {
            return true;
        }
        self.segments.iter().any(|(e, a, b)| match p {
            Point::Edge(pe, t) => pe == e && a <= t && t <= b,
            Point::Vertex(v) => {
                let (u, w) = f.edges()[*e];
                (a.is_zero() && u == *v) || (b.is_one() && w == *v)
            }
        })
    }

    /// Whether the segments on `edge` cover `[a, b]`.
    pub(super) fn covers(&self, edge: usize, a: &Rat, b: &Rat) -> bool {
        let mut spans: Vec<(&Rat, &Rat)> = self
            .segments
            .iter()
            .filter(|(e, _, _)| *e == edge)
            .map(|(_, x, y)| (x, y))
            .collect();
        spans.sort();
        let mut reach = a.clone();
        for (x, y) in spans {
            if x > &reach {
                break;
            }
            if y > &reach {
                reach = y.clone();
            }
            if &reach >= b {
                return true;
            }
        }
        false
    }

    /// Whether some point of the fixed set lies on the closed edge `e` away
    /// from its endpoints.
    pub fn meets_edge_interior(&self, e: usize) -> bool {
        self.segments.iter().any(|(se, _, _)| *se == e)
            || self
                .points
                .iter()
                .any(|p| matches!(p, Point::Edge(pe, _) if *pe == e))
    }
}

/// Solves `f(x) = x` exactly on every piece.
pub fn fixed_points(f: &MarkovTreeMap) -> FixSet {
    let mut fix = FixSet::default();
    for piece in f.pieces() {
        if piece.image_edge == piece.edge {
            let k = piece.slope();
            if !k.is_one() {
                let s = (&piece.t0 - &k * &piece.s0) / (Rat::one() - &k);
                if piece.s0 <= s && s <= piece.s1 {
                    fix.points.insert(f.point(piece.edge, s));
                }
            } else if piece.t0 == piece.s0 {
                fix.segments
                    .push((piece.edge, piece.s0.clone(), piece.s1.clone()));
            }
        }
        for (s, t) in [(&piece.s0, &piece.t0), (&piece.s1, &piece.t1)] {
            let x = f.point(piece.edge, s.clone());
            if x == f.point(piece.image_edge, t.clone()) {
                fix.points.insert(x);
            }
        }
    }
    fix
}

/// `f, f^2, ..., f^p`.
pub fn iterates(f: &MarkovTreeMap, p: u32, exec: Exec) -> Result<Vec<MarkovTreeMap>, MarkovError> {
    let mut out: Vec<MarkovTreeMap> = Vec::with_capacity(p as usize);
    if p == 0 {
        return Ok(out);
    }
    out.push(f.clone());
    for _ in 1..p {
        let next = f.compose(out.last().expect("nonempty"), exec)?;
        out.push(next);
    }
    Ok(out)
}

/// Least periods realized up to a bound, with their place in the Sharkovskiy ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PeriodSet {
    pub bound: u32,
    pub realized: Vec<u64>,
    /// The `≻`-largest realized period.
    pub top: Option<SharkType>,
    /// Periods of `Sh(top) ∩ [1, bound]` that are not realized.
    pub missing: Vec<u64>,
}

impl PeriodSet {
    /// The smallest `k` with `realized = Sh(k) ∩ [1, bound]`, or `None` when the
    /// realized set is not a down-set of the ordering.
    pub fn classification(&self) -> Option<SharkType> {
        self.top.filter(|_| self.missing.is_empty())
    }

    pub fn is_down_set(&self) -> bool {
        self.classification().is_some()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.realized.binary_search(&p).is_ok()
    }
}

/// Exact least periods of `f` up to `bound`: composes `f` up to `bound` times,
/// solves `f^p(x) = x` on each piece and removes points fixed by `f^q` for a
/// proper divisor `q` of `p`.
pub fn exact_periods(f: &MarkovTreeMap, bound: u32) -> Result<PeriodSet, MarkovError> {
    exact_periods_with(f, bound, Exec::default())
}

pub fn exact_periods_with(
    f: &MarkovTreeMap,
    bound: u32,
    exec: Exec,
) -> Result<PeriodSet, MarkovError> {
    guard(bound)?;
    Ok(exact_periods_unchecked(f, bound, exec)?.0)
}

/// Fixed sets of `f, f^2, ..., f^bound`.
pub fn periodic_points(
    f: &MarkovTreeMap,
    bound: u32,
    exec: Exec,
) -> Result<Vec<FixSet>, MarkovError> {
    guard(bound)?;
    let maps = iterates(f, bound, exec)?;
    Ok(exec.map(&maps, fixed_points))
}

fn guard(bound: u32) -> Result<(), MarkovError> {
    if bound > MAX_PERIOD_BOUND {
        return Err(MarkovError::BoundExceeded(format!(
            "period bound {bound} is above {MAX_PERIOD_BOUND}"
        )));
    }
    Ok(())
}

pub(crate) fn exact_periods_unchecked(
    f: &MarkovTreeMap,
    bound: u32,
    exec: Exec,
) -> Result<(PeriodSet, Vec<FixSet>), MarkovError> {
    let maps = iterates(f, bound, exec)?;
    let fix = exec.map(&maps, fixed_points);
    let realized: Vec<u64> = exec
        .map_range(bound as usize, |i| least_period_realized(f, &fix, i + 1))
        .into_iter()
        .enumerate()
        .filter(|&(_, r)| r)
        .map(|(i, _)| i as u64 + 1)
        .collect();
    let top = realized.iter().map(|&n| SharkType::Finite(n)).max();
    let missing = match top {
        Some(k) => (1..=bound as u64)
            .filter(|&n| sh_set_contains(k, n) && realized.binary_search(&n).is_err())
            .collect(),
        None => Vec::new(),
    };
    Ok((
        PeriodSet {
            bound,
            realized,
            top,
            missing,
        },
        fix,
    ))
}

/// Whether some point has least period exactly `p`; `fix[q - 1]` is `Fix(f^q)`.
fn least_period_realized(f: &MarkovTreeMap, fix: &[FixSet], p: usize) -> bool {
    let divisors: Vec<&FixSet> = (1..p).filter(|q| p % q == 0).map(|q| &fix[q - 1]).collect();
    let own = &fix[p - 1];
    if own
        .points
        .iter()
        .any(|x| !divisors.iter().any(|d| d.contains(f, x)))
    {
        return true;
    }
    // an uncovered part of a segment is an interval, and isolated fixed points
    // of the divisors cannot exhaust it
    let mut union = FixSet::default();
    for d in &divisors {
        union.segments.extend(d.segments.iter().cloned());
    }
    own.segments
        .iter()
        .any(|(e, a, b)| !union.covers(*e, a, b))
}
