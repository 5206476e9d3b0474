//! Numerical laboratory for the two-dimensional Euler-Poisson system under
//! radial symmetry.

pub mod error;
pub mod io;
pub mod kg;
pub mod lab;
mod linalg;
pub mod nonlocal;
pub mod params;
pub mod radial;

pub use error::{Error, Result};
