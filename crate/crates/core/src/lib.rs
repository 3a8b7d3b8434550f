//! Lines and ruled quadrics in the Study quadric, their orbits in the Moebius
//! quadric, and the reconstruction of ruled quadrics from pairs of circle
//! families on Darboux cyclides.

pub mod algebra;
pub mod cli;
pub mod cyclide;
pub mod error;
pub mod generate;
pub mod linalg;
pub mod moebius;
pub mod orbit;
pub mod picard;
pub mod poly;
pub mod quatfactor;
pub mod reconstruct;
pub mod scalar;
pub mod study;

pub use error::{Error, Result};
pub use scalar::{Rational, Scalar};
