//! Numerical geometry of Killing submersions over strict Hadamard surfaces.
//!
//! The crate is layered bottom-up: [`base`] handles the two-dimensional
//! base, [`submersion`] the three-dimensional total space, [`surface`]
//! immersed surfaces in it, [`sweep`] the vertical-plane sweep, and
//! [`harness`] configuration-driven scenarios and reports.

pub mod base;
pub mod error;
pub mod expr;
pub mod harness;
pub mod ode;
pub mod quad;
pub mod submersion;
pub mod surface;
pub mod sweep;
pub mod tolerances;

pub use error::{GeomError, Result};
pub use tolerances::Tolerances;
