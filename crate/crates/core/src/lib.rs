//! Numerical toolkit for b-6j symbols and truncated hyperideal tetrahedra.

pub mod b6j;
pub mod complexfn;
pub mod error;
pub mod geometry;
pub mod moduli;
pub mod volume;
pub(crate) mod quad;

pub use complexfn::{ComplexValue, ModularParam};
pub use error::{Error, Result};
