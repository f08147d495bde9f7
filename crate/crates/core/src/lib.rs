//! Yukawa, Newtonian and power-law forces between spheres, slabs and disks,
//! with proximity-force approximations, a quadrature oracle and limit
//! extraction.

pub mod disk;
pub mod error;
pub mod grid;
pub mod layered;
pub mod limits;
pub mod model;
pub mod numeric;
pub mod oracle;
pub mod verify;
pub mod yukawa;

pub use error::{Error, Result};
