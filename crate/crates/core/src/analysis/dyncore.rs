use serde::Serialize;

use crate::dendrite::{DendriteApprox, TreeMap};
use crate::lamination::Class;
use crate::par::Exec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantHull {
    pub members: Vec<bool>,
    /// Members whose image is not stored, so invariance is unverified there.
    pub frontier: Vec<usize>,
}

impl InvariantHull {
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.members.len()).filter(|&v| self.members[v]).collect()
    }
}

/// The smallest subtree containing `seeds` that is closed under the stored
/// images: alternate adding images and taking the tree hull until nothing changes.
pub fn invariant_closure<M: TreeMap + ?Sized>(map: &M, seeds: &[usize]) -> InvariantHull {
    let tree = map.tree();
    let mut members = tree.hull(seeds);
    loop {
        let mut set: Vec<usize> = (0..tree.len()).filter(|&v| members[v]).collect();
        set.extend(set.clone().into_iter().filter_map(|v| map.image(v)));
        let next = tree.hull(&set);
        if next == members {
            break;
        }
        members = next;
    }
    let frontier = (0..tree.len())
        .filter(|&v| members[v] && map.image(v).is_none())
        .collect();
    InvariantHull { members, frontier }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "steps", rename_all = "snake_case")]
pub enum AbsorptionStatus {
    /// The orbit is in the core after this many steps.
    Enters(usize),
    /// The orbit leaves the stored classes first.
    Frontier,
    /// The orbit cycles outside the core.
    Never,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Absorption {
    pub class: Class,
    #[serde(flatten)]
    pub status: AbsorptionStatus,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DynamicalCore {
    pub vertices: Vec<usize>,
    /// Critical classes kept as seeds of the core.
    pub critical: Vec<usize>,
    /// Critical classes that ended up outside the core.
    pub dropped: Vec<usize>,
    pub frontier: Vec<usize>,
    /// One more closure step leaves the core unchanged.
    pub stable: bool,
    /// For every stored cutpoint class: when its orbit enters the core.
    pub absorption: Vec<Absorption>,
}

impl DynamicalCore {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Cutpoint orbits that provably never reach the core.
    pub fn failures(&self) -> Vec<&Absorption> {
        self.absorption
            .iter()
            .filter(|a| a.status == AbsorptionStatus::Never)
            .collect()
    }
}

pub fn dynamical_core(dendrite: &DendriteApprox) -> DynamicalCore {
    dynamical_core_with(dendrite, Exec::default())
}

/// The smallest invariant subtree containing the critical classes that belong
/// to it. Starting from the whole stored tree, the critical classes inside the
/// current candidate are closed under images and hulls, and the result becomes
/// the next candidate until it stops changing.
pub fn dynamical_core_with(dendrite: &DendriteApprox, exec: Exec) -> DynamicalCore {
    let n = dendrite.len();
    let all_critical = dendrite.lamination().critical_classes();
    let mut candidate = vec![true; n];
    let (hull, critical) = loop {
        let kept: Vec<usize> = all_critical
            .iter()
            .copied()
            .filter(|&c| candidate[c])
            .collect();
        let hull = invariant_closure(dendrite, &kept);
        if hull.members == candidate || kept.is_empty() {
            break (hull, kept);
        }
        candidate = hull.members.clone();
    };
    let stable = invariant_closure(dendrite, &critical).members == hull.members;
    let dropped = all_critical
        .iter()
        .copied()
        .filter(|&c| !hull.members[c])
        .collect();
    let members = &hull.members;
    let absorption = exec
        .map_range(n, |v| {
            if dendrite.class(v).len() < 2 {
                return None;
            }
            let mut cur = v;
            for steps in 0..=n {
                if members[cur] {
                    return Some((v, AbsorptionStatus::Enters(steps)));
                }
                match dendrite.image(cur) {
                    Some(w) => cur = w,
                    None => return Some((v, AbsorptionStatus::Frontier)),
                }
            }
            Some((v, AbsorptionStatus::Never))
        })
        .into_iter()
        .flatten()
        .map(|(v, status)| Absorption {
            class: dendrite.class(v).clone(),
            status,
        })
        .collect();
    DynamicalCore {
        vertices: hull.vertices(),
        critical,
        dropped,
        frontier: hull.frontier.clone(),
        stable,
        absorption,
    }
}
