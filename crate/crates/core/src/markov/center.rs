use std::collections::HashMap;

use num_traits::{Signed, ToPrimitive, Zero};

use super::periods::periodic_points;
use super::{MarkovError, MarkovTreeMap, Rat};
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq)]
pub struct CenterRow {
    pub max_period: u32,
    /// Largest distance from a cluster point to a point of period at most `max_period`.
    pub max_distance: Rat,
    pub approx: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CenterReport {
    pub budget: usize,
    pub samples: usize,
    /// Samples whose orbit repeated within the budget, so that their limit set
    /// is the exact cycle reached.
    pub closed_orbits: usize,
    pub cluster_points: usize,
    pub rows: Vec<CenterRow>,
    pub eps: Rat,
    pub within_eps: bool,
    /// Distances are weakly decreasing as the period bound grows.
    pub monotone: bool,
    pub passed: bool,
}

/// `n` equally spaced interior points of the interval of an interval map.
pub fn uniform_samples(f: &MarkovTreeMap, n: usize) -> Result<Vec<Rat>, MarkovError> {
    let xs = f
        .coordinates()
        .ok_or_else(|| MarkovError::NotAnInterval("samples need coordinates".into()))?;
    let (a, b) = (&xs[0], &xs[xs.len() - 1]);
    let denom = Rat::from_integer((n as i64 + 1).into());
    Ok((1..=n as i64)
        .map(|k| a + (b - a) * Rat::from_integer(k.into()) / &denom)
        .collect())
}

/// The limit set of `x` as seen within `budget` exact iterations: the cycle if
/// the orbit repeats, otherwise the second half of the orbit.
fn cluster(f: &MarkovTreeMap, x: &Rat, budget: usize) -> Result<(Vec<Rat>, bool), MarkovError> {
    let mut seen: HashMap<Rat, usize> = HashMap::new();
    let mut orbit: Vec<Rat> = Vec::with_capacity(budget);
    let mut cur = x.clone();
    for i in 0..budget {
        if let Some(&j) = seen.get(&cur) {
            return Ok((orbit[j..i].to_vec(), true));
        }
        seen.insert(cur.clone(), i);
        orbit.push(cur.clone());
        cur = f
            .eval_coordinate(&cur)
            .ok_or_else(|| MarkovError::Invalid(format!("sample {x} is outside the interval")))?;
    }
    Ok((orbit.split_off(budget / 2), false))
}

/// Periodic points of period at most a bound, as sorted coordinates and
/// coordinate intervals of identity segments.
struct PeriodicSet {
    points: Vec<Rat>,
    spans: Vec<(Rat, Rat)>,
}

impl PeriodicSet {
    fn distance(&self, x: &Rat) -> Option<Rat> {
        let i = self.points.partition_point(|p| p < x);
        let near = [i.checked_sub(1), Some(i)]
            .into_iter()
            .flatten()
            .filter_map(|j| self.points.get(j))
            .map(|p| (p - x).abs());
        let spans = self.spans.iter().map(|(a, b)| {
            if x < a {
                a - x
            } else if x > b {
                x - b
            } else {
                Rat::zero()
            }
        });
        near.chain(spans).min()
    }
}

/// Compares limit sets of sampled orbits with the periodic points of an
/// interval map: for each period bound, the largest distance from a cluster
/// point to a periodic point of at most that period.
pub fn center_vs_periodic_closure(
    f: &MarkovTreeMap,
    samples: &[Rat],
    eps: &Rat,
    max_periods: &[u32],
    budget: usize,
    exec: Exec,
) -> Result<CenterReport, MarkovError> {
    if !f.is_interval() {
        return Err(MarkovError::NotAnInterval(
            "the center comparison is for interval maps".into(),
        ));
    }
    let mut bounds = max_periods.to_vec();
    bounds.sort_unstable();
    bounds.dedup();
    let top = bounds.last().copied().unwrap_or(0);
    let fix = periodic_points(f, top, exec)?;
    let sets: Vec<PeriodicSet> = bounds
        .iter()
        .map(|&p| {
            let mut points = Vec::new();
            let mut spans = Vec::new();
            for set in &fix[..p as usize] {
                points.extend(set.points.iter().filter_map(|x| f.coordinate(x)));
                for (e, a, b) in &set.segments {
                    let at = |t: &Rat| {
                        f.coordinate(&f.point(*e, t.clone())).expect("interval map")
                    };
                    spans.push((at(a), at(b)));
                }
            }
            points.sort();
            points.dedup();
            PeriodicSet { points, spans }
        })
        .collect();
    let clusters = exec.map(samples, |x| cluster(f, x, budget));
    let mut closed = 0;
    let mut all: Vec<Rat> = Vec::new();
    for c in clusters {
        let (pts, done) = c?;
        closed += done as usize;
        all.extend(pts);
    }
    all.sort();
    all.dedup();
    let rows: Vec<CenterRow> = bounds
        .iter()
        .zip(&sets)
        .map(|(&p, set)| {
            let max_distance = exec
                .map(&all, |x| set.distance(x))
                .into_iter()
                .flatten()
                .max()
                .unwrap_or_else(Rat::zero);
            CenterRow {
                max_period: p,
                approx: max_distance.to_f64().unwrap_or(f64::NAN),
                max_distance,
            }
        })
        .collect();
    let within_eps = rows.last().is_some_and(|r| &r.max_distance <= eps);
    let monotone = rows.windows(2).all(|w| w[1].max_distance <= w[0].max_distance);
    Ok(CenterReport {
        budget,
        samples: samples.len(),
        closed_orbits: closed,
        cluster_points: all.len(),
        rows,
        eps: eps.clone(),
        within_eps,
        monotone,
        passed: within_eps || monotone,
    })
}
