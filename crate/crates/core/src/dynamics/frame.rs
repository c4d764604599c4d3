//! Two-laser rotating frame.
//!
//! Each laser drives the two nuclear-conserving transitions of one electron
//! branch. In the frame where every ground level |b, m⟩ rotates with the
//! laser addressing branch `b` and the excited levels with their own energy,
//! the RWA Hamiltonian is time independent:
//!
//! ```text
//! H[b m, b m] = Δ(b, m) = δ_b − (ω(b, m) − ω̄_b)
//! H[X m, X m] = 0
//! H[X m, b m] = Ω_b / 2
//! ```
//!
//! where `δ_b` is the laser detuning from the nuclear-averaged transition
//! `ω̄_b`. Two-photon resonance in sector `m` is `Δ(↑, m) = Δ(↓, m)`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::LEVELS;
use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::spin::{optical_transitions, Branch, Level, LevelDiagram, NuclearSpin, SpinSystemConfig};

/// A CW laser addressing one electron branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSpec {
    pub branch: Branch,
    /// Rabi frequency, Hz.
    pub rabi_hz: f64,
    /// Laser frequency minus the nuclear-averaged branch transition, Hz.
    #[serde(default)]
    pub detuning_hz: f64,
}

impl DriveSpec {
    pub fn new(branch: Branch, rabi_hz: f64, detuning_hz: f64) -> Self {
        Self {
            branch,
            rabi_hz,
            detuning_hz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("rabi_hz", self.rabi_hz)?;
        ensure_finite("detuning_hz", self.detuning_hz)
    }
}

/// Effective 6×6 Hamiltonian (Hz) together with the drives defining its frame.
#[derive(Debug, Clone, PartialEq)]
pub struct RotatingFrame {
    pub hamiltonian: DMatrix<Complex64>,
    pub pump: DriveSpec,
    pub probe: DriveSpec,
}

/// One-photon detuning Δ(b, m) of the laser on branch `b` from the transition
/// of nuclear sector `m`.
pub fn sector_detuning(diagram: &LevelDiagram, drive: &DriveSpec, nucleus: NuclearSpin) -> f64 {
    drive.detuning_hz - diagram.transition_offset(drive.branch, nucleus)
}

/// Probe detuning at which sector `m` reaches two-photon resonance with the
/// given pump.
pub fn two_photon_detuning(diagram: &LevelDiagram, pump: &DriveSpec, nucleus: NuclearSpin) -> f64 {
    let probe_branch = pump.branch.opposite();
    sector_detuning(diagram, pump, nucleus) + diagram.transition_offset(probe_branch, nucleus)
}

/// Build the RWA Hamiltonian for a pump and a probe on opposite branches.
/// Flip-flop terms of `A S·I` never enter: ground energies are the secular ones.
pub fn assemble_rotating_frame(
    cfg: &SpinSystemConfig,
    pump: &DriveSpec,
    probe: &DriveSpec,
) -> Result<RotatingFrame> {
    cfg.validate()?;
    pump.validate()?;
    probe.validate()?;
    if pump.branch == probe.branch {
        return Err(Error::SameBranch(pump.branch));
    }
    let secular = SpinSystemConfig {
        secular_only: true,
        ..cfg.clone()
    };
    let diagram = optical_transitions(&secular);
    let mut h = DMatrix::zeros(LEVELS, LEVELS);
    for drive in [pump, probe] {
        for nucleus in NuclearSpin::BOTH {
            let g = Level::ground(drive.branch, nucleus).index();
            let x = Level::excited(nucleus).index();
            h[(g, g)] = Complex64::new(sector_detuning(&diagram, drive, nucleus), 0.0);
            let coupling = Complex64::new(0.5 * drive.rabi_hz, 0.0);
            h[(g, x)] = coupling;
            h[(x, g)] = coupling;
        }
    }
    Ok(RotatingFrame {
        hamiltonian: h,
        pump: *pump,
        probe: *probe,
    })
}
