use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ensemble::ensemble_average;
use crate::dynamics::{
    assemble_rotating_frame, build_liouvillian, observables, steady_state, two_photon_detuning, DensityMatrix,
    DissipatorSpec, DriveSpec,
};
use crate::error::{ensure_finite, ensure_non_negative, Error, Result};
use crate::spin::{optical_transitions, Branch, LevelDiagram, NuclearSpin, SpinSystemConfig};

/// Uniform probe-detuning grid, Hz. Both ends are included when `stop - start`
/// is a multiple of `step`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbeGrid {
    pub start_hz: f64,
    pub stop_hz: f64,
    pub step_hz: f64,
}

impl ProbeGrid {
    pub fn new(start_hz: f64, stop_hz: f64, step_hz: f64) -> Self {
        Self {
            start_hz,
            stop_hz,
            step_hz,
        }
    }

    /// Symmetric grid over ±`half_span_hz`.
    pub fn centered(half_span_hz: f64, step_hz: f64) -> Self {
        Self::new(-half_span_hz, half_span_hz, step_hz)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("probe_grid.start_hz", self.start_hz)?;
        ensure_finite("probe_grid.stop_hz", self.stop_hz)?;
        ensure_finite("probe_grid.step_hz", self.step_hz)?;
        if self.step_hz <= 0.0 {
            return Err(Error::invalid("probe_grid.step_hz", "must be > 0"));
        }
        if self.stop_hz <= self.start_hz {
            return Err(Error::invalid("probe_grid.stop_hz", "must exceed start_hz"));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop_hz - self.start_hz) / self.step_hz + 1e-9).floor() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.start_hz + i as f64 * self.step_hz).collect()
    }
}

fn default_pump() -> DriveSpec {
    DriveSpec::new(Branch::Up, 120e6, 0.0)
}

fn default_probe_rabi() -> f64 {
    120e6
}

fn default_samples() -> usize {
    21
}

/// A probe sweep against a fixed pump.
///
/// The probe addresses the branch opposite to the pump. Pump on ↑e is the
/// low-energy configuration, pump on ↓e the high-energy one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub system: SpinSystemConfig,
    #[serde(default = "default_pump")]
    pub pump: DriveSpec,
    #[serde(default = "default_probe_rabi")]
    pub probe_rabi_hz: f64,
    pub probe_grid: ProbeGrid,
    #[serde(default)]
    pub dissipators: DissipatorSpec,
    /// FWHM of the common-mode optical detuning spread, Hz. Zero disables
    /// ensemble averaging.
    #[serde(default)]
    pub inhomogeneous_fwhm_hz: f64,
    #[serde(default = "default_samples")]
    pub ensemble_samples: usize,
}

/// Probe detuning of an analytic two-photon resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonPoint {
    pub nucleus: NuclearSpin,
    pub probe_detuning_hz: f64,
}

impl SweepConfig {
    /// Reference drives and rates over the given grid.
    pub fn new(probe_grid: ProbeGrid) -> Self {
        Self {
            system: SpinSystemConfig::default(),
            pump: default_pump(),
            probe_rabi_hz: default_probe_rabi(),
            probe_grid,
            dissipators: DissipatorSpec::reference(),
            inhomogeneous_fwhm_hz: 0.0,
            ensemble_samples: default_samples(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.system.validate()?;
        self.pump.validate()?;
        ensure_non_negative("probe_rabi_hz", self.probe_rabi_hz)?;
        self.probe_grid.validate()?;
        self.dissipators.validate()?;
        ensure_non_negative("inhomogeneous_fwhm_hz", self.inhomogeneous_fwhm_hz)?;
        if self.inhomogeneous_fwhm_hz > 0.0 && self.ensemble_samples < 3 {
            return Err(Error::invalid("ensemble_samples", "must be >= 3"));
        }
        let a = self.system.hyperfine_hz.abs();
        if a > 0.0 && self.probe_grid.step_hz > a / 20.0 {
            log::warn!(
                "probe step {:.3e} Hz exceeds |A|/20 = {:.3e} Hz; dips may be unresolved",
                self.probe_grid.step_hz,
                a / 20.0
            );
        }
        Ok(())
    }

    pub fn probe(&self, detuning_hz: f64) -> DriveSpec {
        DriveSpec::new(self.pump.branch.opposite(), self.probe_rabi_hz, detuning_hz)
    }

    /// Level diagram in the secular approximation used by the rotating frame.
    pub fn diagram(&self) -> LevelDiagram {
        optical_transitions(&SpinSystemConfig {
            secular_only: true,
            ..self.system.clone()
        })
    }

    /// Two-photon resonances sorted by probe detuning.
    pub fn two_photon_points(&self) -> [TwoPhotonPoint; 2] {
        let d = self.diagram();
        let mut pts = NuclearSpin::BOTH.map(|nucleus| TwoPhotonPoint {
            nucleus,
            probe_detuning_hz: two_photon_detuning(&d, &self.pump, nucleus),
        });
        pts.sort_by(|a, b| a.probe_detuning_hz.total_cmp(&b.probe_detuning_hz));
        pts
    }

    /// Power-broadened dark-resonance width estimate, Hz.
    pub fn expected_dip_width_hz(&self) -> Option<f64> {
        let d = &self.dissipators;
        let optical = d.gamma_rad_hz + 2.0 * d.gamma_deph_opt_hz;
        if optical <= 0.0 {
            return None;
        }
        let w = (self.pump.rabi_hz.powi(2) + self.probe_rabi_hz.powi(2)) / optical + d.gamma_e_relax_hz;
        (w > 0.0).then_some(w)
    }

    /// Steady state at one probe detuning for a donor whose optical line is
    /// shifted by `shift_hz`.
    pub fn steady_state_at(&self, probe_detuning_hz: f64, shift_hz: f64) -> Result<DensityMatrix> {
        let pump = DriveSpec {
            detuning_hz: self.pump.detuning_hz - shift_hz,
            ..self.pump
        };
        let probe = self.probe(probe_detuning_hz - shift_hz);
        let frame = assemble_rotating_frame(&self.system, &pump, &probe)?;
        steady_state(&build_liouvillian(&frame, &self.dissipators)?)
    }

    /// The same experiment with pump and probe branches exchanged. With
    /// mirrored rates the steady states map onto each other under
    /// ↑e↔↓e, ↑n↔↓n.
    pub fn swapped_configuration(&self) -> Self {
        Self {
            pump: DriveSpec {
                branch: self.pump.branch.opposite(),
                ..self.pump
            },
            dissipators: self.dissipators.mirrored(),
            ..self.clone()
        }
    }
}

/// Sampled signal against probe detuning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub probe_detunings_hz: Vec<f64>,
    /// Excited population × gamma_rad.
    pub signal: Vec<f64>,
    /// Analytic two-photon resonances, when known.
    pub two_photon: Vec<TwoPhotonPoint>,
    /// Width used to size the dip-detection baseline window, Hz.
    pub expected_dip_width_hz: Option<f64>,
}

impl Spectrum {
    pub fn new(probe_detunings_hz: Vec<f64>, signal: Vec<f64>) -> Result<Self> {
        if probe_detunings_hz.len() != signal.len() {
            return Err(Error::Dimension {
                expected: probe_detunings_hz.len(),
                actual: signal.len(),
            });
        }
        if probe_detunings_hz.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::invalid("probe_detunings_hz", "must be strictly increasing"));
        }
        Ok(Self {
            probe_detunings_hz,
            signal,
            two_photon: Vec::new(),
            expected_dip_width_hz: None,
        })
    }

    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }

    /// Nuclear label of the two-photon resonance nearest to `detuning_hz`.
    pub fn nucleus_near(&self, detuning_hz: f64) -> Option<NuclearSpin> {
        self.two_photon
            .iter()
            .min_by(|a, b| {
                (a.probe_detuning_hz - detuning_hz)
                    .abs()
                    .total_cmp(&(b.probe_detuning_hz - detuning_hz).abs())
            })
            .map(|p| p.nucleus)
    }
}

/// Spectrum of a single donor whose optical line is shifted by `shift_hz`
/// (both lasers see the same shift).
pub fn single_donor_sweep(cfg: &SweepConfig, shift_hz: f64) -> Result<Spectrum> {
    cfg.validate()?;
    let grid = cfg.probe_grid.points();
    let gamma = cfg.dissipators.gamma_rad_hz;
    let signal = grid
        .par_iter()
        .map(|&x| {
            let rho = cfg.steady_state_at(x, shift_hz)?;
            Ok(observables(&rho).excited_total.max(0.0) * gamma)
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(Spectrum {
        probe_detunings_hz: grid,
        signal,
        two_photon: cfg.two_photon_points().to_vec(),
        expected_dip_width_hz: cfg.expected_dip_width_hz(),
    })
}

/// One steady-state solve per grid point, ensemble averaged when
/// `inhomogeneous_fwhm_hz > 0`.
pub fn cpt_sweep(cfg: &SweepConfig) -> Result<Spectrum> {
    cfg.validate()?;
    if cfg.inhomogeneous_fwhm_hz > 0.0 {
        ensemble_average(cfg, |shift| single_donor_sweep(cfg, shift))
    } else {
        single_donor_sweep(cfg, 0.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_includes_both_ends() {
        let g = ProbeGrid::new(-1.0, 1.0, 0.1);
        let p = g.points();
        assert_eq!(p.len(), 21);
        assert!((p[20] - 1.0).abs() < 1e-12);
        assert!(ProbeGrid::new(1.0, 0.0, 0.1).validate().is_err());
        assert!(ProbeGrid::new(0.0, 1.0, 0.0).validate().is_err());
    }

    #[test]
    fn defaults_fill_from_minimal_toml() {
        let cfg: SweepConfig = toml::from_str(
            "[probe_grid]\nstart_hz = -1e8\nstop_hz = 1e8\nstep_hz = 1e6\n",
        )
        .unwrap();
        assert_eq!(cfg, SweepConfig::new(ProbeGrid::new(-1e8, 1e8, 1e6)));
    }

    #[test]
    fn two_photon_points_bracket_zero() {
        let cfg = SweepConfig::new(ProbeGrid::centered(1e9, 1e6));
        let [low, high] = cfg.two_photon_points();
        assert_eq!(low.nucleus, NuclearSpin::Up);
        assert!((low.probe_detuning_hz + 196e6).abs() < 1e-3);
        assert!((high.probe_detuning_hz - 196e6).abs() < 1e-3);
        let he = cfg.swapped_configuration().two_photon_points();
        assert_eq!(he[0].nucleus, NuclearSpin::Down);
    }

    #[test]
    fn probe_without_pump_goes_dark() {
        let mut cfg = SweepConfig::new(ProbeGrid::centered(400e6, 50e6));
        let pumped = cpt_sweep(&cfg).unwrap();
        cfg.pump.rabi_hz = 0.0;
        let dark = cpt_sweep(&cfg).unwrap();
        for (d, p) in dark.signal.iter().zip(&pumped.signal) {
            assert!(*d >= 0.0 && d / p < 1e-6, "{d} vs {p}");
        }
    }

    #[test]
    fn rejects_small_ensemble() {
        let mut cfg = SweepConfig::new(ProbeGrid::centered(1e8, 1e7));
        cfg.inhomogeneous_fwhm_hz = 1e9;
        cfg.ensemble_samples = 2;
        assert!(cpt_sweep(&cfg).is_err());
    }
}
