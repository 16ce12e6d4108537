//! Analytic and numerical machinery for short-range pair correlation in
//! central-potential quantum systems: cusp functions for the free, generalized
//! Coulomb, charge-dipole, and repulsive van der Waals classes, regular radial
//! solutions anchored at the coalescence point, wave-function rigidity
//! identities, energy-Taylor series of the cusp solution, and separability
//! diagnostics for a pair embedded in an N-particle configuration.
//!
//! All quantities are in scaled units with `hbar^2 / (2 mu) = 1`: potential
//! strengths are the user-supplied `2 mu G / hbar^2`, energies are inverse
//! squared lengths.

pub mod cuspfn;
pub mod energyseries;
pub mod error;
pub mod potential;
pub mod radial;
pub mod rigidity;
pub mod separability;
pub mod specialfn;

pub use error::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
