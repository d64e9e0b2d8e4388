use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::omega::{classify_limit_point, omega_limit_with, LimitPointRecord};
use super::periodic::{nearest_periodic_distance, periodic_cutpoints};
use super::{AnalysisError, Seed};
use crate::circle::{Distance, Precision, RatAngle};
use crate::lamination::{Class, ClassId, Lamination};
use crate::par::Exec;

/// Which limit-set statement a report checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    /// Limit points of persistent cutpoints lie in the closure of periodic cutpoints.
    Limdend,
    /// Recurrent points of arc type lie in the closure of periodic points.
    Recdend,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theorem::Limdend => "limdend",
            Theorem::Recdend => "recdend",
        })
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "limdend" => Ok(Theorem::Limdend),
            "recdend" => Ok(Theorem::Recdend),
            _ => Err(format!("unknown theorem tag `{s}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyParams {
    pub max_periods: Vec<u32>,
    pub budget: u64,
    pub precision: Precision,
}

impl VerifyParams {
    /// Digits used to order stream iterates against each other. Sturmian orbits
    /// take only `L + 1` distinct values at `L` digits, so telling `budget`
    /// iterates apart needs about `budget` digits.
    pub fn resolution(&self) -> Precision {
        Precision((2 * self.precision.0).max(self.budget.min(u32::MAX as u64) as u32))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DistanceRow {
    pub max_period: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<Distance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecordRow {
    pub target: Class,
    pub limit_type: String,
    pub at_budget: bool,
    pub witnesses: usize,
    pub chain: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_edge: Option<String>,
    /// Least period of the target class, for exact targets.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class_period: Option<usize>,
    pub distances: Vec<DistanceRow>,
    pub monotone: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedReport {
    pub seed: String,
    pub kind: String,
    pub persistence: String,
    pub records: Vec<RecordRow>,
    pub exact_failures: Vec<String>,
    pub notes: Vec<String>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: Theorem,
    pub depth: u32,
    pub max_periods: Vec<u32>,
    pub precision: u32,
    pub budget: u64,
    pub passed: bool,
    pub exact_failures: usize,
    pub seeds: Vec<SeedReport>,
}

/// The persistence precondition. Exact seeds are decided from their orbit
/// portrait; stream seeds are checked up to `budget` iterates, where the angles
/// of each iterate must stay distinguishable at `2 · precision` digits.
pub fn check_persistence(
    d: u32,
    seed: &Seed,
    budget: u64,
    precision: Precision,
    exec: Exec,
) -> Result<(), AnalysisError> {
    match seed {
        Seed::Exact(c) => {
            let portrait = c.orbit_portrait(d)?;
            match portrait.orbit.iter().find(|k| k.len() < 2) {
                Some(endpoint) => Err(AnalysisError::NotPersistent {
                    seed: c.to_string(),
                    endpoint: endpoint.to_string(),
                }),
                None => Ok(()),
            }
        }
        Seed::Stream(angles) => {
            let digits = 2 * precision.0 as usize;
            let collapses = exec.map_range(budget as usize, |n| {
                let mut words = angles
                    .iter()
                    .map(|a| a.sigma_n(d, n as u64)?.digits(d, digits))
                    .collect::<Result<Vec<_>, _>>()?;
                words.sort();
                words.dedup();
                Ok::<_, AnalysisError>(words.len() < angles.len())
            });
            for (n, r) in collapses.into_iter().enumerate() {
                if r? {
                    return Err(AnalysisError::NotPersistent {
                        seed: seed.to_string(),
                        endpoint: format!("iterate {n}, whose angles agree to {digits} digits"),
                    });
                }
            }
            Ok(())
        }
    }
}

fn weakly_decreasing(rows: &[DistanceRow]) -> bool {
    let mut sorted: Vec<&DistanceRow> = rows.iter().collect();
    sorted.sort_by_key(|r| r.max_period);
    sorted.windows(2).all(|w| match (w[0].distance, w[1].distance) {
        (_, None) => w[0].distance.is_none(),
        (None, Some(_)) => true,
        (Some(a), Some(b)) => b <= a,
    })
}

/// Stored periodic cutpoints for each period bound, shared by all records of a run.
type CutpointTable = Vec<(u32, Vec<ClassId>)>;

fn cutpoint_table(lam: &Lamination, max_periods: &[u32]) -> Result<CutpointTable, AnalysisError> {
    max_periods
        .iter()
        .map(|&p| Ok((p, periodic_cutpoints(lam, p)?.stored)))
        .collect()
}

fn distances(
    lam: &Lamination,
    theorem: Theorem,
    target: &Class,
    cuts: &CutpointTable,
) -> Result<Vec<DistanceRow>, AnalysisError> {
    let d = lam.degree();
    let stored_bud = |a: RatAngle| {
        lam.class_of_angle(a)
            .is_some_and(|id| lam.class(id).len() == 1)
    };
    let nothing = |_: RatAngle| false;
    cuts.iter()
        .map(|(p, stored)| {
            let p = *p;
            let classes: Vec<&Class> = match theorem {
                Theorem::Limdend => stored.iter().map(|&i| lam.class(i)).collect(),
                Theorem::Recdend => Vec::new(),
            };
            let excluded: &dyn Fn(RatAngle) -> bool = match theorem {
                Theorem::Limdend => &stored_bud,
                Theorem::Recdend => &nothing,
            };
            let mut distance = nearest_periodic_distance(target, d, p, &classes, excluded)?;
            if theorem == Theorem::Recdend && p > 0 {
                // a periodic class whose angles have longer periods still counts
                if let Ok(portrait) = target.orbit_portrait(d) {
                    if portrait.preperiod == 0 && portrait.period <= p as usize {
                        distance = Some(Distance::ZERO);
                    }
                }
            }
            Ok(DistanceRow {
                max_period: p,
                approx: distance.map(|x| x.to_f64()),
                distance,
            })
        })
        .collect()
}

fn edge_string(e: (RatAngle, RatAngle)) -> String {
    format!("({}, {})", e.0, e.1)
}

fn seed_report(
    lam: &Lamination,
    theorem: Theorem,
    seed: &Seed,
    params: &VerifyParams,
    cuts: &CutpointTable,
    exec: Exec,
) -> Result<SeedReport, AnalysisError> {
    let d = lam.degree();
    if theorem == Theorem::Limdend {
        check_persistence(d, seed, params.budget, params.precision, exec)?;
    }
    let records = omega_limit_with(lam, seed, params.budget, params.precision, exec)?;
    let mut rows = Vec::new();
    let mut exact_failures = Vec::new();
    let mut notes = Vec::new();
    for record in &records {
        let (limit_type, chain, side_edge) =
            match classify_limit_point(lam, seed, record, params.resolution()) {
                Ok(c) => (c.limit_type.to_string(), c.chain, c.side_edge.map(edge_string)),
                Err(AnalysisError::InsufficientWitnesses { target, count }) => {
                    notes.push(format!("{target}: only {count} usable witnesses"));
                    ("insufficient".to_string(), Vec::new(), None)
                }
                Err(e) => return Err(e),
            };
        if record.collapsed {
            notes.push(format!("{}: iterate angles merge at this precision", record.target));
        }
        let class_period = (!record.at_budget)
            .then(|| record.target.orbit_portrait(d).ok())
            .flatten()
            .filter(|p| p.preperiod == 0)
            .map(|p| p.period);
        let dist = distances(lam, theorem, &record.target, cuts)?;
        if seed.is_exact() {
            let period = class_period.unwrap_or(usize::MAX);
            if theorem == Theorem::Limdend && record.target.len() < 2 {
                exact_failures.push(format!("{} is not a cutpoint", record.target));
            }
            for row in &dist {
                if row.max_period as usize >= period && row.distance != Some(Distance::ZERO) {
                    exact_failures.push(format!(
                        "{} at max period {}: distance {}",
                        record.target,
                        row.max_period,
                        row.distance.map_or("none".to_string(), |x| x.to_string())
                    ));
                }
            }
        }
        rows.push(RecordRow {
            target: record.target.clone(),
            limit_type,
            at_budget: record.at_budget,
            witnesses: record.witnesses.len(),
            chain,
            side_edge,
            class_period,
            monotone: weakly_decreasing(&dist),
            distances: dist,
        });
    }
    let passed = exact_failures.is_empty() && rows.iter().all(|r| r.monotone);
    Ok(SeedReport {
        seed: seed.to_string(),
        kind: if seed.is_exact() { "exact" } else { "stream" }.to_string(),
        persistence: match (theorem, seed.is_exact()) {
            (Theorem::Recdend, _) => "not required",
            (_, true) => "exact",
            (_, false) => "bounded-horizon",
        }
        .to_string(),
        records: rows,
        exact_failures,
        notes,
        passed,
    })
}

/// Runs the limit-set check for every seed: exact seeds must sit at distance 0
/// from the periodic cutpoints (or periodic points) once the period bound
/// reaches the period of the limit class, stream seeds must show distances that
/// do not increase with the period bound.
pub fn verify_recurrence_theorems(
    lam: &Lamination,
    theorem: Theorem,
    seeds: &[Seed],
    params: &VerifyParams,
    exec: Exec,
) -> Result<VerificationReport, AnalysisError> {
    let cuts = cutpoint_table(lam, &params.max_periods)?;
    let reports = exec.map(seeds, |s| seed_report(lam, theorem, s, params, &cuts, Exec::Sequential));
    let seeds = reports.into_iter().collect::<Result<Vec<_>, _>>()?;
    let exact_failures = seeds.iter().map(|s| s.exact_failures.len()).sum();
    let mut max_periods = params.max_periods.clone();
    max_periods.sort_unstable();
    Ok(VerificationReport {
        theorem,
        depth: lam.depth(),
        max_periods,
        precision: params.precision.0,
        budget: params.budget,
        passed: seeds.iter().all(|s| s.passed),
        exact_failures,
        seeds,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilityReport {
    /// Cells whose verdict could be compared between two runs.
    pub matched: usize,
    pub disagreements: Vec<String>,
}

impl StabilityReport {
    pub fn stable(&self) -> bool {
        self.matched > 0 && self.disagreements.is_empty()
    }
}

fn verdicts(
    lam: &Lamination,
    seed: &Seed,
    budget: u64,
    precision: Precision,
    exec: Exec,
) -> Result<BTreeMap<Vec<Vec<u8>>, String>, AnalysisError> {
    let params = VerifyParams {
        max_periods: Vec::new(),
        budget,
        precision,
    };
    let records = omega_limit_with(lam, seed, budget, precision, exec)?;
    let d = lam.degree();
    let verdict = |r: &LimitPointRecord| -> Result<String, AnalysisError> {
        match classify_limit_point(lam, seed, r, params.resolution()) {
            Ok(c) => Ok(c.limit_type.to_string()),
            Err(AnalysisError::InsufficientWitnesses { .. }) => Ok("insufficient".to_string()),
            Err(e) => Err(e),
        }
    };
    let out = exec.map(&records, |r| {
        let key: Vec<Vec<u8>> = r
            .target
            .angles()
            .iter()
            .map(|a| a.digit_prefix(d, precision.0 as usize))
            .collect();
        Ok::<_, AnalysisError>((key, verdict(r)?))
    });
    out.into_iter().collect()
}

/// Compares stream verdicts at `(budget, precision)` against a run with twice
/// the budget and a run with twice the precision. Cells of the finer run are
/// matched to the coarse cell containing them.
pub fn verdict_stability(
    lam: &Lamination,
    seed: &Seed,
    budget: u64,
    precision: Precision,
    exec: Exec,
) -> Result<StabilityReport, AnalysisError> {
    let base = verdicts(lam, seed, budget, precision, exec)?;
    let longer = verdicts(lam, seed, 2 * budget, precision, exec)?;
    let finer = verdicts(lam, seed, budget, Precision(2 * precision.0), exec)?;
    let p = precision.0 as usize;
    let mut matched = 0;
    let mut disagreements = Vec::new();
    let runs = [("budget", longer), ("precision", finer)];
    for (what, run) in &runs {
        for (key, v) in run {
            let mut coarse: Vec<Vec<u8>> = key.iter().map(|w| w[..p].to_vec()).collect();
            coarse.sort();
            if let Some(b) = base.get(&coarse) {
                matched += 1;
                if b != v {
                    disagreements.push(format!("cell {coarse:?}: {b} at base, {v} with doubled {what}"));
                }
            }
        }
    }
    Ok(StabilityReport {
        matched,
        disagreements,
    })
}
