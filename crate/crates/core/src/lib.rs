//! Coloring grounded L-graphs through flat classes and pillar assignments.
//!
//! The crate is `no_std` with `alloc`. Every coordinate is an exact rational,
//! so geometric predicates never round.

#![no_std]
#![allow(clippy::result_large_err)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod colorer;
pub mod coord;
pub mod extend;
pub mod flatten;
pub mod geometry;
pub mod graph;
pub mod instances;
pub mod pillars;
pub mod rng;

pub use colorer::{color_grounded_l, verify_coloring, Coloring};
pub use coord::{Coord, Extended};
pub use geometry::{canonicalize, intersects, validate_collection, LCollection, LShape};
pub use graph::{build_intersection_graph, IntersectionGraph};
