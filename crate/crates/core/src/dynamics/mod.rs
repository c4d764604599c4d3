//! Two-laser rotating-frame master equation of the six-level donor model.

mod density;
mod evolve;
mod frame;
mod liouvillian;
mod observables;
mod steady;

pub use density::{DensityMatrix, LEVELS};
pub use evolve::{evolve_to, time_evolve, Trajectory};
pub use frame::{assemble_rotating_frame, sector_detuning, two_photon_detuning, DriveSpec, RotatingFrame};
pub use liouvillian::{build_liouvillian, CollapseChannel, DissipatorSpec, Liouvillian, LiouvillianMeta};
pub use observables::{observables, Observables};
pub use steady::steady_state;
