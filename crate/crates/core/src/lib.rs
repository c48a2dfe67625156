pub mod bessel;
pub mod cli;
pub mod error;
pub mod expansion;
pub mod operators;
pub mod ratio;
pub mod quadrature;
pub mod sobolev;
pub mod special;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};
