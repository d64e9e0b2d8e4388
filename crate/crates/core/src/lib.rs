//! Exact combinatorics of `σ_d`-invariant laminations of the circle, the finite
//! tree models of their quotient dendrites, and piecewise-linear Markov maps on
//! intervals and trees.

pub mod analysis;
pub mod circle;
pub mod dendrite;
pub mod lamination;
pub mod markov;
pub mod par;

pub use par::Exec;
