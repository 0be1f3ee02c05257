//! Exact computations on smooth Fano lattice polytopes.
//!
//! A smooth Fano polytope is a lattice polytope with the origin in its
//! interior whose facets are simplices spanned by lattice bases. This crate
//! validates such polytopes, computes their primitive relations, walls,
//! projections and numerical invariants, decides isomorphism, enumerates
//! all classes in dimensions up to three and verifies the bundled catalog of
//! four-dimensional classes.

pub mod catalog;
pub mod enumerate;
pub mod exactlin;
pub mod invariants;
pub mod isom;
pub mod polytope;
pub mod project;
pub mod properties;
pub mod relations;

pub use exactlin::{IntMatrix, LinalgError, RationalVector};
pub use polytope::{validate_fano, FanoPolytope, LatticePoint, PolytopeError};
