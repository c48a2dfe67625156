//! Operators built on the systems: heat semigroups (plain and differentiated),
//! kernel comparators, the Trotter sandwich, the Green function, Riesz transforms
//! and potentials.

pub mod comparators;
pub mod green;
pub mod heat;
pub mod potential;
pub mod riesz;
pub mod trotter;

pub use heat::{KernelConfig, KernelKind};
