//! Exact L^{2k} moments of matrix elements over compact-group orbits, and the
//! certified bounds on max |f| they yield.
//!
//! Two instances are provided:
//!
//! * [`spherepoly`]: homogeneous polynomials on the unit sphere (the orbit of
//!   a point under the orthogonal group);
//! * [`assign`]: the d-dimensional assignment objective f(g) = <B, gA> over
//!   the symmetric group, with greedy permutation extraction, and
//!   [`hypergraph`] built on top of it.
//!
//! [`theory`] checks the generic sandwich inequalities exhaustively for small
//! symmetric groups.

pub mod assign;
pub mod bounds;
pub mod error;
pub mod exactnum;
pub mod hypergraph;
pub mod io;
pub mod partition;
pub mod spherepoly;
pub mod theory;

pub use bounds::Interval;
pub use error::{Error, Result};
pub use exactnum::Rational;
