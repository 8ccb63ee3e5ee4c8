//! Exact rational machinery for mixed-integer convex formulations.
//!
//! Everything in this crate computes over arbitrary-precision rationals;
//! there is no floating-point mode. The crate provides:
//!
//! - integer lattice algorithms (Hermite normal form, unimodular completion),
//! - conic and polyhedral set types with exact projection and enumeration,
//! - formulation builders for unions, products, sums and disjunctions of
//!   convex sets with integer index variables,
//! - midpoint-based lower bounds on the number of integer variables,
//! - compilers from periodic subsets of the naturals and from eventually
//!   periodic piecewise linear functions down to mixed-integer linear
//!   formulations,
//! - exact volume and homothety analysis for small-dimensional families,
//! - JSON and LP-format serialization plus a fixture registry.

pub mod bounds;
pub mod cones;
pub mod error;
pub mod fixtures;
pub mod formulations;
pub mod io;
pub mod naturals;
pub mod polyhedron;
pub mod pwl;
pub mod rational;
pub mod shapes;

pub use error::{Error, Result};
pub use rational::{Int, Rat};
