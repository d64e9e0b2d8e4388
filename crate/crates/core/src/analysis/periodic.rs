use std::collections::BTreeSet;

use super::AnalysisError;
use crate::circle::{Distance, RatAngle};
use crate::lamination::{Class, ClassId, Lamination};

const ENUMERATION_CAP: u64 = 1 << 24;
const SCAN_CAP: u64 = 1 << 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicCutpoints {
    pub max_period: u32,
    /// Stored classes of size at least two on a cycle of period at most `max_period`.
    pub stored: Vec<ClassId>,
    /// Periodic angles of period at most `max_period` that no stored class contains.
    /// Their classes are unknown at the stored depth.
    pub candidates_beyond_depth: Vec<RatAngle>,
}

fn modulus(d: u32, q: u32) -> Result<u64, AnalysisError> {
    (d as u64)
        .checked_pow(q)
        .map(|x| x - 1)
        .filter(|&m| m <= ENUMERATION_CAP)
        .ok_or_else(|| AnalysisError::BoundExceeded(format!("{d}^{q} - 1 angles per period")))
}

/// Stored classes that are periodic cutpoints with period at most `p`, plus the
/// periodic angles beyond the stored depth.
pub fn periodic_cutpoints(lam: &Lamination, p: u32) -> Result<PeriodicCutpoints, AnalysisError> {
    let d = lam.degree();
    let mut stored = Vec::new();
    if p > 0 {
        for id in 0..lam.len() {
            let c = lam.class(id);
            if c.len() < 2 {
                continue;
            }
            let portrait = c.orbit_portrait(d)?;
            if portrait.preperiod == 0 && portrait.period <= p as usize {
                stored.push(id);
            }
        }
    }
    let candidates_beyond_depth = periodic_angles(d, p)?
        .into_iter()
        .filter(|&a| lam.class_of_angle(a).is_none())
        .collect();
    Ok(PeriodicCutpoints {
        max_period: p,
        stored,
        candidates_beyond_depth,
    })
}

/// All angles of period at most `p` under `σ_d`, increasing.
pub fn periodic_angles(d: u32, p: u32) -> Result<Vec<RatAngle>, AnalysisError> {
    let mut out = BTreeSet::new();
    for q in 1..=p {
        let m = modulus(d, q)?;
        for k in 0..m {
            out.insert(RatAngle::new(k, m)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Circle distance from `class` to the nearest periodic point of period at most `p`.
///
/// Candidate points are the periodic angles of period at most `p` for which
/// `excluded` is false, together with the classes in `classes`. Angles are
/// located by scanning outwards from `t · (d^q − 1)`, so nothing is enumerated.
pub fn nearest_periodic_distance(
    class: &Class,
    d: u32,
    p: u32,
    classes: &[&Class],
    excluded: &dyn Fn(RatAngle) -> bool,
) -> Result<Option<Distance>, AnalysisError> {
    let mut best: Option<Distance> = classes.iter().map(|c| class.distance(c)).min();
    for q in 1..=p {
        let m = (d as u64)
            .checked_pow(q)
            .map(|x| x - 1)
            .ok_or_else(|| AnalysisError::BoundExceeded(format!("{d}^{q} - 1 overflows")))?;
        for &t in class.angles() {
            let k0 = (t.numer() as u128 * m as u128 / t.denom() as u128) as u64;
            for up in [false, true] {
                let mut j = 0u64;
                loop {
                    if j >= SCAN_CAP.min(m) {
                        break;
                    }
                    let k = if up {
                        (k0 + 1 + j) % m
                    } else {
                        (k0 + m - j % m) % m
                    };
                    let a = RatAngle::new(k, m)?;
                    if !excluded(a) {
                        let dist = t.circle_distance(&a);
                        best = Some(best.map_or(dist, |b| b.min(dist)));
                        break;
                    }
                    j += 1;
                }
            }
        }
    }
    Ok(best)
}
