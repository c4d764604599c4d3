//! CPT spectra, dip detection, hyperfine extraction and pump-power series.
//!
//! The signal is the steady-state excited population times `gamma_rad`,
//! a proxy for the collected photoluminescence.

mod dips;
mod ensemble;
mod power;
mod sweep;

pub use dips::{extract_hyperfine, find_dips, find_dips_with, Dip, DipOptions, DipReport};
pub use ensemble::{ensemble_average, gauss_hermite, GaussianNodes};
pub use power::{pump_power_series, PowerPoint, PowerSeries};
pub use sweep::{cpt_sweep, single_donor_sweep, ProbeGrid, Spectrum, SweepConfig, TwoPhotonPoint};
