//! Orbits, limit sets, periodic cutpoints, fixed-point searches and the
//! dynamical core of the topological polynomial of a stored lamination.

mod dyncore;
mod fixed;
mod omega;
mod periodic;
mod verify;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use dyncore::{
    dynamical_core, dynamical_core_with, invariant_closure, Absorption, AbsorptionStatus,
    DynamicalCore, InvariantHull,
};
pub use fixed::{
    boundary_scrambling_check, fixed_cutpoint_search, is_outward_edge, one_sided_returns,
    FixedSearch, OneSidedReport, ScramblingReport,
};
pub use omega::{
    classify_limit_point, omega_limit, omega_limit_with, Classification, LimitPointRecord,
    LimitType,
};
pub use periodic::{
    nearest_periodic_distance, periodic_angles, periodic_cutpoints, PeriodicCutpoints,
};
pub use verify::{
    check_persistence, verdict_stability, verify_recurrence_theorems, DistanceRow, RecordRow,
    SeedReport, StabilityReport, Theorem, VerificationReport, VerifyParams,
};

use crate::circle::{Angle, CircleError, RatAngle};
use crate::dendrite::DendriteError;
use crate::lamination::{split_top_level, Class, LaminationError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Lamination(#[from] LaminationError),
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error(transparent)]
    Dendrite(#[from] DendriteError),
    #[error("seed {0} is not a stored class")]
    NotAVertex(String),
    #[error("FRONTIER: the orbit of {seed} leaves the stored classes after {last}; increase --depth")]
    Frontier { seed: String, last: String },
    #[error("seed {seed} is not a persistent cutpoint: its image {endpoint} is an endpoint")]
    NotPersistent { seed: String, endpoint: String },
    #[error("INSUFFICIENT-WITNESSES: {target} has {count} usable witnesses, at least 3 are needed")]
    InsufficientWitnesses { target: String, count: usize },
    #[error("vertex set is not a subtree: {0}")]
    NotASubtree(String),
    #[error("BOUND-EXCEEDED: {0}")]
    BoundExceeded(String),
}

/// A seed point for orbit questions: an exact class, or a class of digit streams
/// whose orbit can only be followed to finite precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Seed {
    Exact(Class),
    Stream(Vec<Angle>),
}

impl Seed {
    pub fn is_exact(&self) -> bool {
        matches!(self, Seed::Exact(_))
    }

    pub fn len(&self) -> usize {
        match self {
            Seed::Exact(c) => c.len(),
            Seed::Stream(a) => a.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl From<Class> for Seed {
    fn from(c: Class) -> Self {
        Seed::Exact(c)
    }
}

impl fmt::Display for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Seed::Exact(c) => write!(f, "{c}"),
            Seed::Stream(angles) => {
                let parts: Vec<String> = angles.iter().map(|a| a.to_string()).collect();
                write!(f, "{{{}}}", parts.join(","))
            }
        }
    }
}

impl FromStr for Seed {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| LaminationError::BadClass(s.to_string()))?;
        let angles = split_top_level(body)
            .iter()
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<Angle>())
            .collect::<Result<Vec<_>, _>>()?;
        if angles.is_empty() {
            return Err(LaminationError::EmptyClass.into());
        }
        if angles.iter().all(Angle::is_exact) {
            let exact = angles
                .iter()
                .map(Angle::to_rational)
                .collect::<Result<Vec<RatAngle>, _>>()?;
            return Ok(Seed::Exact(Class::new(exact)?));
        }
        Ok(Seed::Stream(angles))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_parse_as_exact_or_stream() {
        let s: Seed = "{7/12,1/12}".parse().unwrap();
        assert_eq!(s, Seed::Exact("{1/12,7/12}".parse().unwrap()));
        let s: Seed = "{base=2;pre=;per=001}".parse().unwrap();
        assert_eq!(s.to_string(), "{1/7}");
        let s: Seed = "{sturmian(alpha=4181/6765,rho=1/3),sturmian(alpha=2584/6765,rho=2/3)}"
            .parse()
            .unwrap();
        assert!(!s.is_exact());
        assert_eq!(s.len(), 2);
        assert!("{}".parse::<Seed>().is_err());
        assert!("1/3".parse::<Seed>().is_err());
    }
}
