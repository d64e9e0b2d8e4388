use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{Class, ClassId, Lamination, LinkIndex};
use crate::par::Exec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    #[serde(rename = "E1-finite")]
    E1Finite,
    E2,
    E3,
    D1,
    D2,
    D3,
    D4,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::E1Finite => "E1-finite",
            Axiom::E2 => "E2",
            Axiom::E3 => "E3",
            Axiom::D1 => "D1",
            Axiom::D2 => "D2",
            Axiom::D3 => "D3",
            Axiom::D4 => "D4",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: Axiom,
    pub witnesses: Vec<Class>,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub passed: bool,
    pub checked: Vec<Axiom>,
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl AxiomReport {
    pub fn violations_of(&self, axiom: Axiom) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(move |v| v.axiom == axiom)
    }
}

pub fn check_axioms(lam: &Lamination) -> AxiomReport {
    check_axioms_with(lam, Exec::default())
}

/// Audits a finite class collection against the lamination and invariance axioms.
///
/// `E1-finite` is the finite surrogate of closedness: stored classes must be
/// pairwise disjoint, so that they are the classes of one equivalence relation on
/// the stored angles. `E3` and `D4` hold for every finite nonempty class and are
/// recorded as checked.
pub fn check_axioms_with(lam: &Lamination, exec: Exec) -> AxiomReport {
    let d = lam.degree();
    let mut violations = Vec::new();

    // E1-finite: every angle has a single owner.
    for id in 0..lam.len() {
        for &a in lam.class(id).angles() {
            let owner = lam.class_of_angle(a).expect("angle indexed");
            if owner != id {
                violations.push(Violation {
                    axiom: Axiom::E1Finite,
                    witnesses: vec![lam.class(owner).clone(), lam.class(id).clone()],
                    note: format!("angle {a} lies in two stored classes"),
                });
                break;
            }
        }
    }

    // E2 via the stabbing index.
    let index = LinkIndex::from_classes(lam.classes().iter().map(|c| &c.class).enumerate());
    let linked: Vec<Vec<(ClassId, ClassId)>> = exec.map_range(lam.len(), |id| {
        let mut pairs = BTreeSet::new();
        for (x, y) in lam.class(id).edges() {
            for o in index.crossings(x, y) {
                if o > id {
                    pairs.insert((id, o));
                }
            }
        }
        pairs.into_iter().collect()
    });
    for (a, b) in linked.into_iter().flatten() {
        violations.push(Violation {
            axiom: Axiom::E2,
            witnesses: vec![lam.class(a).clone(), lam.class(b).clone()],
            note: "linked classes".into(),
        });
    }

    let per_class: Vec<Vec<Violation>> = exec.map_range(lam.len(), |id| {
        let mut out = Vec::new();
        let c = lam.class(id);
        let image = c.image(d);
        if lam.image(id).is_none() {
            let note = match lam.class_of_angle(image.first()) {
                Some(o) => format!("image {image} is not a stored class (meets {})", lam.class(o)),
                None => format!("image {image} is not stored"),
            };
            out.push(Violation {
                axiom: Axiom::D1,
                witnesses: vec![c.clone(), image.clone()],
                note,
            });
        }
        if !c.covers_image_in_order(d) {
            out.push(Violation {
                axiom: Axiom::D3,
                witnesses: vec![c.clone(), image],
                note: "consecutive angles do not map to consecutive angles of the image".into(),
            });
        }
        if let Some(v) = check_preimages(lam, id) {
            out.push(v);
        }
        out
    });
    violations.extend(per_class.into_iter().flatten());

    let mut warnings = Vec::new();
    let crit = lam.criticality();
    if crit as u32 > d - 1 {
        warnings.push(format!(
            "total criticality {crit} exceeds degree - 1 = {}",
            d - 1
        ));
    }

    AxiomReport {
        passed: violations.is_empty(),
        checked: vec![
            Axiom::E1Finite,
            Axiom::E2,
            Axiom::E3,
            Axiom::D1,
            Axiom::D2,
            Axiom::D3,
            Axiom::D4,
        ],
        violations,
        warnings,
    }
}

/// D2 for a class whose full preimage is stored: the preimage splits into at
/// most `d` stored classes, each mapping onto the class.
fn check_preimages(lam: &Lamination, id: ClassId) -> Option<Violation> {
    let d = lam.degree();
    let g = lam.class(id);
    let mut pre = Vec::new();
    for a in g.angles() {
        pre.extend(a.preimages(d).ok()?);
    }
    let owners: Option<BTreeSet<ClassId>> = pre.iter().map(|&a| lam.class_of_angle(a)).collect();
    let owners = owners?;
    let bad: Vec<Class> = owners
        .iter()
        .map(|&o| lam.class(o))
        .filter(|c| c.image(d) != *g)
        .cloned()
        .collect();
    if !bad.is_empty() || owners.len() > d as usize {
        let mut witnesses = vec![g.clone()];
        witnesses.extend(bad);
        return Some(Violation {
            axiom: Axiom::D2,
            witnesses,
            note: format!("preimage splits into {} stored classes", owners.len()),
        });
    }
    None
}

#[cfg(test)]
mod tests {
    use super::super::{pullback_closure, StoredClass};
    use super::*;

    fn c(s: &str) -> Class {
        s.parse().unwrap()
    }

    fn raw(d: u32, classes: &[&str]) -> Lamination {
        let classes = classes
            .iter()
            .map(|s| StoredClass {
                class: c(s),
                depth: 0,
            })
            .collect();
        Lamination::from_parts(d, 0, classes, Vec::new()).unwrap()
    }

    #[test]
    fn missing_image_fails_d1() {
        let lam = raw(2, &["{1/3,2/3}", "{1/12,7/12}", "{1/6}"]);
        let report = check_axioms(&lam);
        assert!(!report.passed);
        let d1: Vec<_> = report.violations_of(Axiom::D1).collect();
        assert_eq!(d1.len(), 1);
        assert_eq!(d1[0].witnesses, vec![c("{1/6}"), c("{1/3}")]);
    }

    #[test]
    fn linked_leaves_fail_e2() {
        let lam = raw(2, &["{0,1/2}", "{1/4,3/4}"]);
        let report = check_axioms(&lam);
        let e2: Vec<_> = report.violations_of(Axiom::E2).collect();
        assert_eq!(e2.len(), 1);
        assert_eq!(e2[0].witnesses, vec![c("{0,1/2}"), c("{1/4,3/4}")]);
    }

    #[test]
    fn overlap_fails_e1_surrogate() {
        let lam = raw(2, &["{1/3,2/3}", "{1/3}"]);
        assert_eq!(check_axioms(&lam).violations_of(Axiom::E1Finite).count(), 1);
    }

    #[test]
    fn wrong_orientation_fails_d3() {
        // σ_3 sends 0, 2/9, 4/9 to 0, 2/3, 1/3: the cyclic order is reversed.
        let lam = raw(3, &["{0,2/9,4/9}", "{0,1/3,2/3}"]);
        let report = check_axioms(&lam);
        assert!(report.violations_of(Axiom::D3).count() >= 1, "{report:?}");
    }

    #[test]
    fn pullback_passes() {
        let lam = pullback_closure(2, &[c("{1/12,7/12}"), c("{1/7,2/7,4/7}")], 6).unwrap();
        let report = check_axioms(&lam);
        assert!(report.passed, "{report:?}");
        assert!(report.warnings.is_empty());
    }
}
