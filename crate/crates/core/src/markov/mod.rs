//! Exact piecewise-linear maps of finite trees and intervals, their periodic
//! points, and the Sharkovskiy ordering of the periods they realize.

mod build;
mod center;
mod io;
mod map;
mod periods;
mod shark;

use num_rational::BigRational;
use thiserror::Error;

pub use build::{
    builtin, from_vertex_images, identity, interval_from_graph, random_interval_map,
    random_star_map, stefan_map, tent, truncated_tent, truncated_tent_window, TentWindow,
};
pub use center::{center_vs_periodic_closure, uniform_samples, CenterReport, CenterRow};
pub use io::{parse_markov_toml, write_markov_toml, MarkovFile, PieceEntry};
pub use map::{MarkovTreeMap, Piece, Point};
pub use periods::{
    exact_periods, exact_periods_with, fixed_points, iterates, periodic_points, FixSet, PeriodSet,
    MAX_PERIOD_BOUND,
};
pub use shark::{sh_set_contains, sharkovskiy_less, SharkType};

/// Exact rational numbers used for coordinates, parameters and slopes.
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error(transparent)]
    Tree(#[from] crate::dendrite::DendriteError),
    #[error("invalid map: {0}")]
    Invalid(String),
    #[error("map is discontinuous at {0}")]
    Discontinuous(String),
    #[error("BOUND-EXCEEDED: {0}")]
    BoundExceeded(String),
    #[error("not an interval map: {0}")]
    NotAnInterval(String),
    #[error("{0}")]
    Parse(String),
}
