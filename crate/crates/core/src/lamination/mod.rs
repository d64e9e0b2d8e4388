//! Laminations as finite collections of pairwise unlinked classes, with the
//! invariance axioms as executable checks and pullback closure generation.

mod axioms;
mod class;
mod index;
pub mod io;
mod pullback;

use std::collections::HashMap;

pub use axioms::{check_axioms, check_axioms_with, Axiom, AxiomReport, Violation};
pub use class::{split_top_level, Class, ClassKind, OrbitPortrait};
pub use index::LinkIndex;
pub use pullback::{forward_closure, pullback_closure, pullback_closure_with};

use thiserror::Error;

use crate::circle::{CircleError, RatAngle};

pub type ClassId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaminationError {
    #[error(transparent)]
    Circle(#[from] CircleError),
    #[error("empty class")]
    EmptyClass,
    #[error("invalid class `{0}`")]
    BadClass(String),
    #[error("degree must be at least 2, got {0}")]
    BadDegree(u32),
    #[error("classes {0} and {1} share an angle")]
    Overlapping(Class, Class),
    #[error("classes {0} and {1} are linked")]
    Linked(Class, Class),
    #[error("image {image} of {class} meets the stored class {stored} without equaling it")]
    InconsistentImage {
        class: Class,
        image: Class,
        stored: Class,
    },
    #[error("stored class {stored} meets the preimage of {class} but does not map onto it")]
    InconsistentPreimage { class: Class, stored: Class },
    #[error("no unlinked sibling partition of the preimage of {class} exists at depth {depth}")]
    NoConsistentPullback { class: Class, depth: u32 },
    #[error(
        "AMBIGUOUS-PULLBACK: the preimage of {class} at depth {depth} admits {options} unlinked sibling partitions"
    )]
    AmbiguousPullback {
        class: Class,
        depth: u32,
        options: usize,
    },
    #[error("BOUND-EXCEEDED: {0}")]
    BoundExceeded(String),
}

/// A class together with the pullback generation that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredClass {
    pub class: Class,
    pub depth: u32,
}

/// A degree together with a finite collection of classes.
///
/// Collections built by [`pullback_closure`] are pairwise disjoint and unlinked;
/// collections read from files are taken as given and audited by [`check_axioms`].
#[derive(Clone, Debug)]
pub struct Lamination {
    degree: u32,
    depth: u32,
    classes: Vec<StoredClass>,
    generators: Vec<ClassId>,
    by_angle: HashMap<RatAngle, ClassId>,
    images: Vec<Option<ClassId>>,
}

impl Lamination {
    pub fn from_parts(
        degree: u32,
        depth: u32,
        classes: Vec<StoredClass>,
        generators: Vec<ClassId>,
    ) -> Result<Self, LaminationError> {
        if degree < 2 {
            return Err(LaminationError::BadDegree(degree));
        }
        let mut by_angle = HashMap::new();
        for (id, c) in classes.iter().enumerate() {
            for &a in c.class.angles() {
                by_angle.entry(a).or_insert(id);
            }
        }
        let mut lam = Lamination {
            degree,
            depth,
            classes,
            generators,
            by_angle,
            images: Vec::new(),
        };
        lam.images = (0..lam.classes.len())
            .map(|id| lam.find(&lam.classes[id].class.image(degree)))
            .collect();
        Ok(lam)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[StoredClass] {
        &self.classes
    }

    pub fn class(&self, id: ClassId) -> &Class {
        &self.classes[id].class
    }

    pub fn class_depth(&self, id: ClassId) -> u32 {
        self.classes[id].depth
    }

    pub fn generators(&self) -> &[ClassId] {
        &self.generators
    }

    /// The stored class containing angle `a`.
    pub fn class_of_angle(&self, a: RatAngle) -> Option<ClassId> {
        self.by_angle.get(&a).copied()
    }

    /// The id of a stored class equal to `c`.
    pub fn find(&self, c: &Class) -> Option<ClassId> {
        let id = self.class_of_angle(c.first())?;
        (self.classes[id].class == *c).then_some(id)
    }

    /// The stored image class, or `None` at the depth frontier.
    pub fn image(&self, id: ClassId) -> Option<ClassId> {
        self.images[id]
    }

    /// Stored classes whose image is missing.
    pub fn frontier(&self) -> Vec<ClassId> {
        (0..self.len()).filter(|&i| self.images[i].is_none()).collect()
    }

    /// Orbit of a stored class through stored images: `Ok((preperiod, period, ids))`,
    /// or `Err(last)` when the orbit leaves the stored classes after `last`.
    pub fn stored_orbit(&self, id: ClassId) -> Result<(usize, usize, Vec<ClassId>), ClassId> {
        let mut pos: HashMap<ClassId, usize> = HashMap::new();
        let mut orbit = Vec::new();
        let mut cur = id;
        loop {
            if let Some(&i) = pos.get(&cur) {
                return Ok((i, orbit.len() - i, orbit));
            }
            pos.insert(cur, orbit.len());
            orbit.push(cur);
            cur = self.images[cur].ok_or(cur)?;
        }
    }

    /// Classes of size at least two whose orbit stays among classes of size at
    /// least two (decided exactly from the class itself).
    pub fn is_persistent_cutpoint(&self, id: ClassId) -> Result<bool, LaminationError> {
        is_persistent_cutpoint(self.class(id), self.degree)
    }

    /// Sum over critical classes of the cardinality drop.
    pub fn criticality(&self) -> usize {
        self.classes
            .iter()
            .map(|c| c.class.len() - c.class.image(self.degree).len())
            .sum()
    }

    pub fn critical_classes(&self) -> Vec<ClassId> {
        (0..self.len())
            .filter(|&i| self.class(i).is_critical(self.degree))
            .collect()
    }
}

/// Whether every class in the forward orbit of `c` has at least two angles.
pub fn is_persistent_cutpoint(c: &Class, d: u32) -> Result<bool, LaminationError> {
    Ok(c.orbit_portrait(d)?.orbit.iter().all(|k| k.len() >= 2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> Class {
        s.parse().unwrap()
    }

    #[test]
    fn persistence_examples() {
        assert!(is_persistent_cutpoint(&c("{1/7,2/7,4/7}"), 2).unwrap());
        assert!(!is_persistent_cutpoint(&c("{1/12,7/12}"), 2).unwrap());
        assert!(!is_persistent_cutpoint(&c("{0}"), 2).unwrap());
    }
}
