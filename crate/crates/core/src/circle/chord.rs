use std::cmp::Ordering;
use std::fmt;

use super::{Angle, CircleError, Precision, RatAngle};

/// Anything that can be placed on the circle and compared by position in `[0, 1)`.
pub trait CirclePoint: Clone + fmt::Display {
    fn cmp_at(&self, other: &Self, precision: Precision) -> Result<Ordering, CircleError>;
}

impl CirclePoint for RatAngle {
    fn cmp_at(&self, other: &Self, _: Precision) -> Result<Ordering, CircleError> {
        Ok(self.cmp(other))
    }
}

impl CirclePoint for Angle {
    fn cmp_at(&self, other: &Self, precision: Precision) -> Result<Ordering, CircleError> {
        self.cmp_within(other, precision)
    }
}

fn order_of(ab: Ordering, bc: Ordering, ca: Ordering) -> bool {
    if ab == Ordering::Equal || bc == Ordering::Equal || ca == Ordering::Equal {
        return false;
    }
    [ab, bc, ca].iter().filter(|&&o| o == Ordering::Less).count() == 2
}

/// Whether `a, b, c` are pairwise distinct and occur counterclockwise in that order.
pub fn circular_order<A: CirclePoint>(
    a: &A,
    b: &A,
    c: &A,
    precision: Precision,
) -> Result<bool, CircleError> {
    Ok(order_of(
        a.cmp_at(b, precision)?,
        b.cmp_at(c, precision)?,
        c.cmp_at(a, precision)?,
    ))
}

/// Exact [`circular_order`] for rational angles.
pub fn ccw(a: RatAngle, b: RatAngle, c: RatAngle) -> bool {
    order_of(a.cmp(&b), b.cmp(&c), c.cmp(&a))
}

/// An unordered pair of circle points, stored with the smaller representative first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord<A> {
    a: A,
    b: A,
}

impl Chord<RatAngle> {
    pub fn new(x: RatAngle, y: RatAngle) -> Self {
        if x <= y {
            Chord { a: x, b: y }
        } else {
            Chord { a: y, b: x }
        }
    }
}

impl<A: CirclePoint> Chord<A> {
    pub fn try_new(x: A, y: A, precision: Precision) -> Result<Self, CircleError> {
        match x.cmp_at(&y, precision) {
            Ok(Ordering::Greater) => Ok(Chord { a: y, b: x }),
            Ok(_) => Ok(Chord { a: x, b: y }),
            // Two angles indistinguishable at the budget: keep input order, the
            // chord is reported degenerate by every predicate that needs to know.
            Err(CircleError::Undecided(_)) => Ok(Chord { a: x, b: y }),
            Err(e) => Err(e),
        }
    }

    pub fn endpoints(&self) -> (&A, &A) {
        (&self.a, &self.b)
    }
}

impl<A: fmt::Display> fmt::Display for Chord<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

/// The open arc traversed counterclockwise from `start` to `end`.
///
/// `start == end` gives the empty arc; [`OrientedArc::punctured`] builds the
/// complement of a single point, which is the hole of a one-point class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrientedArc<A> {
    start: A,
    end: A,
    punctured: bool,
}

impl<A: Clone> OrientedArc<A> {
    pub fn new(start: A, end: A) -> Self {
        OrientedArc {
            start,
            end,
            punctured: false,
        }
    }

    pub fn punctured(point: A) -> Self {
        OrientedArc {
            start: point.clone(),
            end: point,
            punctured: true,
        }
    }

    pub fn start(&self) -> &A {
        &self.start
    }

    pub fn end(&self) -> &A {
        &self.end
    }

    pub fn is_punctured_circle(&self) -> bool {
        self.punctured
    }
}

impl<A: fmt::Display> fmt::Display for OrientedArc<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.start, self.end)
    }
}

/// Whether `x` lies strictly inside `arc`.
pub fn in_open_arc<A: CirclePoint>(
    x: &A,
    arc: &OrientedArc<A>,
    precision: Precision,
) -> Result<bool, CircleError> {
    if arc.punctured {
        return Ok(x.cmp_at(&arc.start, precision)? != Ordering::Equal);
    }
    if arc.start.cmp_at(&arc.end, precision)? == Ordering::Equal {
        return Ok(false);
    }
    circular_order(&arc.start, x, &arc.end, precision)
}

/// Whether the open chords cross. Chords sharing an endpoint, and degenerate
/// chords, are unlinked.
pub fn chords_linked<A: CirclePoint>(
    p: &Chord<A>,
    q: &Chord<A>,
    precision: Precision,
) -> Result<bool, CircleError> {
    let pts = [&p.a, &p.b, &q.a, &q.b];
    for i in 0..4 {
        for j in i + 1..4 {
            if pts[i].cmp_at(pts[j], precision)? == Ordering::Equal {
                return Ok(false);
            }
        }
    }
    Ok(circular_order(&p.a, &q.a, &p.b, precision)? != circular_order(&p.a, &q.b, &p.b, precision)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(s: &str) -> RatAngle {
        s.parse().unwrap()
    }

    const P: Precision = Precision(64);

    #[test]
    fn circular_order_examples() {
        assert!(ccw(a("0"), a("1/3"), a("2/3")));
        assert!(!ccw(a("0"), a("2/3"), a("1/3")));
        assert!(ccw(a("1/7"), a("2/7"), a("4/7")));
        assert!(!ccw(a("1/7"), a("1/7"), a("4/7")));
        assert!(circular_order(&a("2/3"), &a("0"), &a("1/3"), P).unwrap());
    }

    #[test]
    fn open_arc_examples() {
        let arc = OrientedArc::new(a("1/3"), a("2/3"));
        assert!(in_open_arc(&a("1/2"), &arc, P).unwrap());
        assert!(!in_open_arc(&a("0"), &arc, P).unwrap());
        assert!(!in_open_arc(&a("1/3"), &arc, P).unwrap());
        let wrap = OrientedArc::new(a("2/3"), a("1/3"));
        assert!(in_open_arc(&a("0"), &wrap, P).unwrap());
        assert!(!in_open_arc(&a("1/2"), &OrientedArc::new(a("0"), a("0")), P).unwrap());
        let hole = OrientedArc::punctured(a("0"));
        assert!(in_open_arc(&a("1/2"), &hole, P).unwrap());
        assert!(!in_open_arc(&a("0"), &hole, P).unwrap());
    }

    #[test]
    fn linkage_examples() {
        let c = |x: &str, y: &str| Chord::new(a(x), a(y));
        assert!(chords_linked(&c("0", "1/2"), &c("1/4", "3/4"), P).unwrap());
        assert!(!chords_linked(&c("0", "1/4"), &c("1/2", "3/4"), P).unwrap());
        assert!(!chords_linked(&c("0", "1/2"), &c("0", "1/4"), P).unwrap());
        assert!(!chords_linked(&c("1/3", "1/3"), &c("1/4", "3/4"), P).unwrap());
    }

    #[test]
    fn stream_chords() {
        let s: Angle = "sturmian(alpha=4181/6765,rho=1/7)".parse().unwrap();
        let t: Angle = "sturmian(alpha=2584/6765,rho=6/7)".parse().unwrap();
        let p = Chord::try_new(s, t, P).unwrap();
        let q = Chord::try_new(Angle::from(a("0")), Angle::from(a("1/2")), P).unwrap();
        let r = Chord::try_new(Angle::from(a("1/4")), Angle::from(a("3/4")), P).unwrap();
        assert!(chords_linked(&q, &r, P).unwrap());
        assert_eq!(
            chords_linked(&p, &q, P).unwrap(),
            chords_linked(&q, &p, P).unwrap()
        );
    }
}
