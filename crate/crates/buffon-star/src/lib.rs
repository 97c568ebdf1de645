//! Intersection statistics for a star of needles thrown onto a lattice of
//! parallelograms.
//!
//! A star of `n` equally long needles with common endpoint and angular
//! spacing `2*pi/n` is dropped uniformly at random onto two families of
//! equidistant parallel lines meeting at angle `alpha`. This crate
//! computes, for odd `n`, the exact probability of every possible number
//! of intersections (jointly per family and in total), the distribution
//! of the relative intersection count and its closed-form limit as `n`
//! grows, and cross-validates everything three ways: against adaptive
//! quadrature over the underlying breadth functions, against a geometric
//! offset-sweep oracle, and against a reproducible Monte Carlo simulation
//! of the physical experiment (which also covers even `n`).
//!
//! The `buffon-star` binary exposes the same functionality as a CLI; see
//! the crate README.

pub mod breadth;
pub mod cli;
pub mod distributions;
mod error;
pub mod exact;
pub mod geometry;
pub mod montecarlo;
pub mod quad;
mod stats;

pub use error::{Error, Result};
pub use exact::{JointMatrix, ProbabilityVector};
pub use geometry::{IntersectionCount, LatticeSpec, Pose, StarSpec, ThrowConfig};
