//! Exact polyhedral toolkit for tropical fans of linear subvarieties and the
//! divisor/polytope bookkeeping of the toric varieties they embed in.
//!
//! The pipeline, end to end: a multigraded degree matrix is Gale-dualized
//! into the ray matrix of an ambient toric variety ([`linalg`]); a linear
//! subspace given by equations becomes a matroid ([`matroid`]) whose tropical
//! variety is computed as a Bergman fan in its fine or coarse (nested-set)
//! structure ([`bergman`]); general fan surgery — validation, stellar
//! subdivision, subfan extraction, flag chains — lives in [`fan`]; divisor
//! classes, nef cones and divisor polytopes in [`divisor`]; exact polytope
//! arithmetic (hulls, Minkowski sums, normalized volume, lattice points) in
//! [`polytope`]; and [`gfan`] reads and writes the `SymmetricFan` text format
//! so results diff cleanly against existing fan listings.
//!
//! All arithmetic is exact (arbitrary-precision rational); outputs are
//! canonically ordered and deterministic.

pub mod bergman;
pub mod dd;
pub mod divisor;
pub mod equations;
pub mod error;
pub mod fan;
pub mod gfan;
pub mod linalg;
pub mod matroid;
pub mod polytope;
pub mod rational;

pub use error::{Error, Result};
pub use linalg::{IntegerVector, RationalMatrix};
pub use rational::{Int, Rational};

pub use num;
