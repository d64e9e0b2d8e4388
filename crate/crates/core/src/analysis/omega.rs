use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{AnalysisError, Seed};
use crate::circle::{Angle, Precision, RatAngle};
use crate::lamination::{Class, Lamination};
use crate::par::Exec;

/// How a limit point is approached by the orbit of the seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitType {
    /// The orbit reaches the target exactly and then cycles (degenerate arc case).
    Landing,
    /// The seed is itself periodic and the target lies on its cycle.
    Periodic,
    Arc,
    NonSeparating,
}

impl LimitType {
    /// Landing and periodic targets count as degenerate arc-type limits.
    pub fn is_arc_type(self) -> bool {
        self != LimitType::NonSeparating
    }
}

impl fmt::Display for LimitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitType::Landing => "landing",
            LimitType::Periodic => "periodic",
            LimitType::Arc => "arc",
            LimitType::NonSeparating => "non_separating",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitPointRecord {
    pub target: Class,
    /// Iterate indices whose image is at (or, for streams, clusters at) the target.
    pub witnesses: Vec<u64>,
    pub limit_type: Option<LimitType>,
    /// For arc type: indices along which each image separates the previous one
    /// from the target.
    pub chain: Vec<u64>,
    /// The edge of the target approached from one side; `(t, t)` for a bud.
    pub side_edge: Option<(RatAngle, RatAngle)>,
    pub at_budget: bool,
    /// Stream clusters only: two angles of the iterates share their digit prefix.
    pub collapsed: bool,
}

const WITNESS_CAP: usize = 64;

/// The limit set of the orbit of `seed`.
///
/// Exact seeds follow stored images and return the classes of the periodic part
/// of the orbit. Stream seeds are iterated for `budget` steps; iterates in the
/// second half of the run are grouped by their first `precision` digits and
/// each cell visited at least twice becomes a record whose target is the class
/// of cell midpoints.
pub fn omega_limit(
    lam: &Lamination,
    seed: &Seed,
    budget: u64,
    precision: Precision,
) -> Result<Vec<LimitPointRecord>, AnalysisError> {
    omega_limit_with(lam, seed, budget, precision, Exec::default())
}

pub fn omega_limit_with(
    lam: &Lamination,
    seed: &Seed,
    budget: u64,
    precision: Precision,
    exec: Exec,
) -> Result<Vec<LimitPointRecord>, AnalysisError> {
    match seed {
        Seed::Exact(c) => exact_omega(lam, c, budget),
        Seed::Stream(angles) => stream_omega(lam.degree(), angles, budget, precision, exec),
    }
}

fn exact_omega(
    lam: &Lamination,
    c: &Class,
    budget: u64,
) -> Result<Vec<LimitPointRecord>, AnalysisError> {
    let id = lam
        .find(c)
        .ok_or_else(|| AnalysisError::NotAVertex(c.to_string()))?;
    let (pre, per, orbit) = lam.stored_orbit(id).map_err(|last| AnalysisError::Frontier {
        seed: c.to_string(),
        last: lam.class(last).to_string(),
    })?;
    let limit_type = if pre == 0 {
        LimitType::Periodic
    } else {
        LimitType::Landing
    };
    Ok((pre..pre + per)
        .map(|j| {
            let end = budget.max(j as u64 + 1);
            LimitPointRecord {
                target: lam.class(orbit[j]).clone(),
                witnesses: (j as u64..end).step_by(per).take(WITNESS_CAP).collect(),
                limit_type: Some(limit_type),
                chain: Vec::new(),
                side_edge: None,
                at_budget: false,
                collapsed: false,
            }
        })
        .collect())
}

fn stream_omega(
    d: u32,
    angles: &[Angle],
    budget: u64,
    precision: Precision,
    exec: Exec,
) -> Result<Vec<LimitPointRecord>, AnalysisError> {
    let p = precision.0 as usize;
    let start = budget / 2;
    let keys = exec.map_range((budget - start) as usize, |i| {
        let n = start + i as u64;
        let mut key = angles
            .iter()
            .map(|a| a.sigma_n(d, n)?.digits(d, p))
            .collect::<Result<Vec<Vec<u8>>, _>>()?;
        key.sort();
        Ok::<_, AnalysisError>((n, key))
    });
    let mut cells: BTreeMap<Vec<Vec<u8>>, Vec<u64>> = BTreeMap::new();
    for r in keys {
        let (n, key) = r?;
        cells.entry(key).or_default().push(n);
    }
    let mut records = Vec::new();
    for (key, visits) in cells {
        if visits.len() < 2 {
            continue;
        }
        let mids = key
            .iter()
            .map(|w| cell_midpoint(w, d))
            .collect::<Result<Vec<_>, _>>()?;
        let target = Class::new(mids)?;
        records.push(LimitPointRecord {
            collapsed: target.len() < key.len(),
            target,
            witnesses: visits,
            limit_type: None,
            chain: Vec::new(),
            side_edge: None,
            at_budget: true,
        });
    }
    Ok(records)
}

/// The midpoint of the base-`d` cell of angles whose expansion starts with `w`.
fn cell_midpoint(w: &[u8], d: u32) -> Result<RatAngle, AnalysisError> {
    let overflow = || {
        AnalysisError::BoundExceeded(format!(
            "a {}-digit cell in base {d} has no u64 midpoint",
            w.len()
        ))
    };
    let mut num: u64 = 0;
    let mut den: u64 = 1;
    for &g in w {
        num = num
            .checked_mul(d as u64)
            .and_then(|x| x.checked_add(g as u64))
            .ok_or_else(overflow)?;
        den = den.checked_mul(d as u64).ok_or_else(overflow)?;
    }
    let num = num.checked_mul(2).and_then(|x| x.checked_add(1)).ok_or_else(overflow)?;
    let den = den.checked_mul(2).ok_or_else(overflow)?;
    Ok(RatAngle::new(num, den)?)
}

/// A point whose base-`d` digits can be read one at a time.
enum Digits {
    Generated(crate::circle::Sturmian),
    Fixed(Vec<u8>),
}

impl Digits {
    fn new(a: &Angle, d: u32, n: u64, limit: usize) -> Result<Self, AnalysisError> {
        Ok(match a.sigma_n(d, n)? {
            Angle::Generated(g) => Digits::Generated(g),
            other => Digits::Fixed(other.digits(d, limit)?),
        })
    }

    fn digit(&self, i: usize) -> u8 {
        match self {
            Digits::Generated(g) => g.digit(i),
            Digits::Fixed(v) => v[i],
        }
    }
}

fn cmp_digits(x: &Digits, y: &Digits, limit: usize) -> Ordering {
    (0..limit)
        .map(|i| x.digit(i).cmp(&y.digit(i)))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Index of the hole of `class` (sorted ranks) containing rank `r`, if `r` is not
/// a member.
fn hole_of(class: &[usize], r: usize) -> Option<usize> {
    if class.binary_search(&r).is_ok() {
        return None;
    }
    let i = class.partition_point(|&a| a < r);
    Some(if i == 0 { class.len() - 1 } else { i - 1 })
}

fn single_hole(class: &[usize], other: &[usize]) -> Option<usize> {
    let h = hole_of(class, other[0])?;
    other
        .iter()
        .all(|&r| hole_of(class, r) == Some(h))
        .then_some(h)
}

fn separates(a: &[usize], b: &[usize], t: &[usize]) -> bool {
    matches!((single_hole(a, b), single_hole(a, t)), (Some(x), Some(y)) if x != y)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub limit_type: LimitType,
    pub chain: Vec<u64>,
    pub side_edge: Option<(RatAngle, RatAngle)>,
    /// Witnesses dropped because they could not be told apart from another
    /// point at the comparison resolution.
    pub undecided: usize,
}

/// Arc versus non-separating type of a limit point.
///
/// Landing and periodic records keep their exact type. For stream records every
/// witnessed image and the target are ordered on the circle by their first
/// `resolution` digits; the verdict is arc when some chain of three witnesses, in
/// iterate order, has each image separating its predecessor from the target.
pub fn classify_limit_point(
    lam: &Lamination,
    seed: &Seed,
    record: &LimitPointRecord,
    resolution: Precision,
) -> Result<Classification, AnalysisError> {
    if let Some(t @ (LimitType::Landing | LimitType::Periodic)) = record.limit_type {
        return Ok(Classification {
            limit_type: t,
            chain: Vec::new(),
            side_edge: None,
            undecided: 0,
        });
    }
    let Seed::Stream(angles) = seed else {
        return Err(AnalysisError::InsufficientWitnesses {
            target: record.target.to_string(),
            count: 0,
        });
    };
    let insufficient = |count| AnalysisError::InsufficientWitnesses {
        target: record.target.to_string(),
        count,
    };
    if record.witnesses.len() < 3 {
        return Err(insufficient(record.witnesses.len()));
    }
    let d = lam.degree();
    let limit = resolution.0 as usize;
    let mut points: Vec<Digits> = record
        .target
        .angles()
        .iter()
        .map(|t| Digits::Fixed(t.digit_prefix(d, limit)))
        .collect();
    for &n in &record.witnesses {
        for a in angles {
            points.push(Digits::new(a, d, n, limit)?);
        }
    }
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&i, &j| cmp_digits(&points[i], &points[j], limit));
    let mut rank = vec![0usize; points.len()];
    for w in 1..order.len() {
        let tie = cmp_digits(&points[order[w - 1]], &points[order[w]], limit).is_eq();
        rank[order[w]] = rank[order[w - 1]] + usize::from(!tie);
    }
    let k = record.target.len();
    let mut target: Vec<usize> = rank[..k].to_vec();
    target.sort_unstable();
    target.dedup();
    let m = angles.len();
    let mut usable: Vec<(u64, Vec<usize>)> = Vec::new();
    for (i, &n) in record.witnesses.iter().enumerate() {
        let mut w: Vec<usize> = rank[k + i * m..k + (i + 1) * m].to_vec();
        w.sort_unstable();
        w.dedup();
        if w.len() == m && w.iter().all(|r| target.binary_search(r).is_err()) {
            usable.push((n, w));
        }
    }
    let undecided = record.witnesses.len() - usable.len();
    if usable.len() < 3 {
        return Err(insufficient(usable.len()));
    }
    let u = usable.len();
    let mut best = vec![1usize; u];
    let mut prev = vec![usize::MAX; u];
    for j in 0..u {
        for i in 0..j {
            if best[i] + 1 > best[j] && separates(&usable[j].1, &usable[i].1, &target) {
                best[j] = best[i] + 1;
                prev[j] = i;
            }
        }
    }
    let (end, &len) = best
        .iter()
        .enumerate()
        .max_by_key(|&(i, b)| (*b, std::cmp::Reverse(i)))
        .expect("at least three witnesses");
    if len < 3 {
        return Ok(Classification {
            limit_type: LimitType::NonSeparating,
            chain: Vec::new(),
            side_edge: None,
            undecided,
        });
    }
    let mut links = vec![end];
    while prev[links[links.len() - 1]] != usize::MAX {
        links.push(prev[links[links.len() - 1]]);
    }
    links.reverse();
    let chain: Vec<u64> = links.iter().map(|&i| usable[i].0).collect();
    let last = &usable[end];
    let side_edge = single_hole(&target, &last.1).map(|h| {
        let t = record.target.angles();
        if t.len() == 1 {
            (t[0], t[0])
        } else {
            let h = h.min(t.len() - 1);
            (t[h], t[(h + 1) % t.len()])
        }
    });
    Ok(Classification {
        limit_type: LimitType::Arc,
        chain,
        side_edge,
        undecided,
    })
}
