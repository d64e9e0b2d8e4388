//! Points of the circle `R/Z`, the angle map `σ_d`, circular order and chord linkage.

mod angle;
mod chord;
mod rational;

pub use angle::{Angle, DigitStream, Sturmian};
pub use chord::{
    ccw, chords_linked, circular_order, in_open_arc, CirclePoint, Chord, OrientedArc,
};
pub use rational::{Distance, RatAngle};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircleError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("arithmetic overflow in exact angle computation")]
    Overflow,
    #[error("unsupported digit base {0} (expected 2..=36)")]
    BadBase(u32),
    #[error("invalid angle `{0}`")]
    BadAngle(String),
    #[error("digit expansion of length {0} is too long to materialize")]
    ExpansionTooLong(usize),
    #[error("UNDECIDED-AT-PRECISION: angles agree on all {0} requested digits")]
    Undecided(u32),
    #[error("stream in base {stream} cannot be shifted by sigma_{degree}")]
    MixedBase { stream: u32, degree: u32 },
    #[error("FORWARD-ORBIT-DIVERGES: `{0}` is not eventually periodic")]
    NotEventuallyPeriodic(String),
}

/// Number of digits examined when a comparison involves a non-periodic stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(pub u32);

impl Default for Precision {
    fn default() -> Self {
        Precision(64)
    }
}
