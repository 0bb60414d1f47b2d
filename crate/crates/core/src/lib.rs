//! Exact spectra of the Lipkin-Meshkov-Glick two-level model.
//!
//! Three routes to the same eigenvalues:
//!
//! * [`fock`]: the full `2^N` configuration space, diagonalized directly.
//! * [`quasispin`]: one `(2j+1)`-dimensional block per su(2) multiplet.
//! * [`algebra`] and [`spectra`]: each multiplet split into the two
//!   tridiagonal blocks of a cubic deformation of sl(2,R).
//!
//! Energies are in units of `ε` unless stated otherwise.

pub mod algebra;
pub mod error;
pub mod exact;
pub mod fock;
pub mod half;
pub mod quasispin;
pub mod spectra;
pub mod tables;

pub use error::{Error, Result};
pub use half::Half;
pub use quasispin::ModelParams;
