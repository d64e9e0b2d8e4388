use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::LaminationError;
use crate::circle::{Angle, Distance, OrientedArc, RatAngle};

/// A finite nonempty set of rational angles, kept sorted in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Class(Vec<RatAngle>);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassKind {
    Bud,
    Leaf,
    Gap,
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassKind::Bud => "bud",
            ClassKind::Leaf => "leaf-class",
            ClassKind::Gap => "gap",
        })
    }
}

/// Preperiod, period and the list of distinct classes in a forward orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPortrait {
    pub preperiod: usize,
    pub period: usize,
    pub orbit: Vec<Class>,
}

impl OrbitPortrait {
    /// The classes of the periodic cycle.
    pub fn cycle(&self) -> &[Class] {
        &self.orbit[self.preperiod..]
    }
}

const ORBIT_STEP_CAP: usize = 1 << 20;

impl Class {
    pub fn new(angles: impl IntoIterator<Item = RatAngle>) -> Result<Self, LaminationError> {
        let mut v: Vec<RatAngle> = angles.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        if v.is_empty() {
            return Err(LaminationError::EmptyClass);
        }
        Ok(Class(v))
    }

    pub fn singleton(a: RatAngle) -> Self {
        Class(vec![a])
    }

    /// Builds a class from angle strings; streams must be eventually periodic.
    pub fn parse_angles<S: AsRef<str>>(tokens: &[S]) -> Result<Self, LaminationError> {
        let angles = tokens
            .iter()
            .map(|t| {
                let a: Angle = t.as_ref().parse()?;
                Ok(a.to_rational()?)
            })
            .collect::<Result<Vec<_>, LaminationError>>()?;
        Class::new(angles)
    }

    pub fn angles(&self) -> &[RatAngle] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn first(&self) -> RatAngle {
        self.0[0]
    }

    pub fn contains(&self, a: RatAngle) -> bool {
        self.0.binary_search(&a).is_ok()
    }

    pub fn kind(&self) -> ClassKind {
        match self.0.len() {
            1 => ClassKind::Bud,
            2 => ClassKind::Leaf,
            _ => ClassKind::Gap,
        }
    }

    /// `σ_d` applied pointwise, duplicates collapsed.
    pub fn image(&self, d: u32) -> Class {
        let mut v: Vec<RatAngle> = self.0.iter().map(|a| a.sigma(d)).collect();
        v.sort_unstable();
        v.dedup();
        Class(v)
    }

    pub fn is_critical(&self, d: u32) -> bool {
        self.image(d).len() < self.len()
    }

    /// The positively oriented complementary arcs between consecutive angles.
    pub fn holes(&self) -> Vec<OrientedArc<RatAngle>> {
        let n = self.0.len();
        if n == 1 {
            return vec![OrientedArc::punctured(self.0[0])];
        }
        (0..n)
            .map(|i| OrientedArc::new(self.0[i], self.0[(i + 1) % n]))
            .collect()
    }

    /// Index of the hole containing `x` (hole `i` runs from angle `i` to angle `i+1`),
    /// or `None` when `x` belongs to the class.
    pub fn hole_of(&self, x: RatAngle) -> Option<usize> {
        let n = self.0.len();
        let idx = self.0.partition_point(|a| *a < x);
        if idx < n && self.0[idx] == x {
            return None;
        }
        Some(if idx == 0 || idx == n { n - 1 } else { idx - 1 })
    }

    /// The circular successor of a member angle.
    pub fn successor(&self, a: RatAngle) -> Option<RatAngle> {
        let i = self.0.binary_search(&a).ok()?;
        Some(self.0[(i + 1) % self.0.len()])
    }

    /// The circular predecessor of a member angle.
    pub fn predecessor(&self, a: RatAngle) -> Option<RatAngle> {
        let i = self.0.binary_search(&a).ok()?;
        let n = self.0.len();
        Some(self.0[(i + n - 1) % n])
    }

    /// Boundary chords of the convex hull, each with its smaller endpoint first.
    pub fn edges(&self) -> Vec<(RatAngle, RatAngle)> {
        match self.0.len() {
            1 => Vec::new(),
            2 => vec![(self.0[0], self.0[1])],
            n => (0..n)
                .map(|i| {
                    let (x, y) = (self.0[i], self.0[(i + 1) % n]);
                    if x < y {
                        (x, y)
                    } else {
                        (y, x)
                    }
                })
                .collect(),
        }
    }

    pub fn is_disjoint(&self, other: &Class) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// For disjoint classes: whether the convex hulls are disjoint, i.e. `self`
    /// lies in a single hole of `other`.
    pub fn unlinked_with(&self, other: &Class) -> bool {
        let h = other.hole_of(self.0[0]);
        self.0.iter().all(|&a| other.hole_of(a) == h)
    }

    /// Whether `x` and `y` (disjoint from `self`) lie in different holes of `self`.
    pub fn separates(&self, x: &Class, y: &Class) -> bool {
        self.hole_of(x.first()) != self.hole_of(y.first())
    }

    /// The hole condition on the image: consecutive angles map to consecutive
    /// angles of the image, unless the image is a single point.
    pub fn covers_image_in_order(&self, d: u32) -> bool {
        let img = self.image(d);
        if img.len() == 1 {
            return true;
        }
        let n = self.0.len();
        (0..n).all(|i| {
            let (a, b) = (self.0[i].sigma(d), self.0[(i + 1) % n].sigma(d));
            img.successor(a) == Some(b)
        })
    }

    /// Minimal circular distance between an angle of `self` and one of `other`.
    pub fn distance(&self, other: &Class) -> Distance {
        let m = &other.0;
        let mut best: Option<Distance> = None;
        for &a in &self.0 {
            let idx = m.partition_point(|b| *b < a);
            for j in [idx % m.len(), (idx + m.len() - 1) % m.len()] {
                let dd = a.circle_distance(&m[j]);
                best = Some(best.map_or(dd, |b| b.min(dd)));
            }
        }
        best.expect("classes are nonempty")
    }

    /// Forward orbit under `σ_d` until the first repeated class.
    pub fn orbit_portrait(&self, d: u32) -> Result<OrbitPortrait, LaminationError> {
        let mut seen: HashMap<Class, usize> = HashMap::new();
        let mut orbit = Vec::new();
        let mut c = self.clone();
        loop {
            if let Some(&i) = seen.get(&c) {
                let period = orbit.len() - i;
                return Ok(OrbitPortrait {
                    preperiod: i,
                    period,
                    orbit,
                });
            }
            if orbit.len() >= ORBIT_STEP_CAP {
                return Err(LaminationError::BoundExceeded(format!(
                    "orbit of {self} longer than {ORBIT_STEP_CAP} classes"
                )));
            }
            seen.insert(c.clone(), orbit.len());
            let next = c.image(d);
            orbit.push(c);
            c = next;
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Class {
    type Err = LaminationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix('{')
            .and_then(|b| b.strip_suffix('}'))
            .ok_or_else(|| LaminationError::BadClass(s.to_string()))?;
        let tokens = split_top_level(body);
        if tokens.iter().all(|t| t.trim().is_empty()) {
            return Err(LaminationError::EmptyClass);
        }
        Class::parse_angles(&tokens)
    }
}

/// Splits on commas that are not inside parentheses, so generator syntax such as
/// `sturmian(alpha=..,rho=..)` stays one token.
pub fn split_top_level(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => {
                depth += 1;
                cur.push(c)
            }
            ')' => {
                depth -= 1;
                cur.push(c)
            }
            ',' if depth == 0 => out.push(std::mem::take(&mut cur).trim().to_string()),
            _ => cur.push(c),
        }
    }
    out.push(cur.trim().to_string());
    out
}

impl Serialize for Class {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Class {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
