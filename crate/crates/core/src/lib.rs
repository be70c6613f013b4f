//! Exact-arithmetic May spectral sequence engine for Morava stabilizer
//! algebras.
//!
//! The crate builds the reduced page-one presentation of S(n,k) (or its
//! polynomial companion T(n,k)) at any prime, computes the second page and
//! Poincare series by linear algebra over F_p, and certifies collapse with
//! filtration-gap and sum-of-index arguments.  Outputs are deterministic:
//! identical inputs give byte-identical tables.

pub mod algebra;
pub mod collapse;
pub mod diff;
pub mod emit;
pub mod error;
pub mod fpla;
pub mod homology;
pub mod hopf;
pub mod msq;

pub use error::{Error, Result};
