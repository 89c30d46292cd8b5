//! Exact computational geometry for cups, caps and convex subsets of planar
//! point sets, together with the partition, good-point and projective
//! machinery behind improved Erdős–Szekeres bounds.
//!
//! All coordinates are exact rationals; no floating point is used in any
//! predicate.

pub mod acceptance;
pub mod bounds;
pub mod chains;
pub mod constructions;
pub mod error;
pub mod geometry;
pub mod good_points;
pub mod partition;
pub mod predicates;
pub mod projective;

pub use chains::{Chain, ChainKind, ConvexWitness, Target};
pub use error::{Error, ErrorClass, Result, ValidationError};
pub use geometry::{Orientation, Point, PointSet, Rational};
pub use predicates::OrientTable;
