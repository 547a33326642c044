//! Executable operator-system cones over the psd cone.
//!
//! The crate provides:
//!
//! * [`hermitian`]: complex Hermitian linear algebra, partial transpose,
//!   Choi matrices and seeded sampling;
//! * [`cones`]: membership oracles with checkable certificates for the
//!   separable, doubly positive, psd, PPT, decomposable and block positive cones;
//! * [`free`]: free-dual pairings, free spectrahedra, Kraus recovery, and
//!   minimal/maximal systems over polyhedral cones;
//! * [`slice`]: the two-parameter family `M(a, b)` whose decomposable slice
//!   has a non-exposed face and is not basic closed;
//! * [`acceptance`]: the end-to-end verification suite.

pub mod acceptance;
pub mod cones;
pub mod error;
pub mod free;
pub mod hermitian;
pub mod slice;

pub use error::{Error, Result};
