//! Forward model of two-laser coherent population trapping (CPT) on a donor
//! electron coupled to a spin-1/2 nucleus, plus defect-energetics and
//! hyperfine finite-size post-processing.

pub mod constants;
pub mod dynamics;
pub mod energetics;
pub mod extrapolation;
pub mod io;
mod error;
pub mod spectroscopy;
pub mod spin;

pub use error::{Error, Result};
