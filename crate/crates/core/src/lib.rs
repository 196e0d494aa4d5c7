//! Exact computation of the two Symanzik polynomials of a multigraph, the
//! exchange graph between spanning trees and spanning 2-forests, and
//! certification tools for the variation of `phi / psi` under bounded
//! perturbations of the edge-weight form.
//!
//! All arithmetic is exact over arbitrary-precision rationals.

pub mod corpus;
pub mod edgeset;
pub mod error;
pub mod exchange;
pub mod homology;
pub mod matrix;
pub mod multigraph;
pub mod rational;
pub mod suite;
pub mod symanzik;
pub mod variation;

pub use edgeset::EdgeSubset;
pub use error::{Error, Result};
pub use matrix::RationalMatrix;
pub use multigraph::{Multigraph, VertexPartition};

/// Arbitrary-precision rational number used throughout.
pub type Rational = num_rational::BigRational;
