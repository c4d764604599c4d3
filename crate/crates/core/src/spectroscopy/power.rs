use rayon::prelude::*;
use serde::Serialize;

use super::dips::{find_dips, DipReport};
use super::sweep::{cpt_sweep, Spectrum, SweepConfig};
use crate::dynamics::observables;
use crate::error::{ensure_non_negative, Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerPoint {
    pub pump_rabi_hz: f64,
    pub spectrum: Spectrum,
    pub report: DipReport,
    /// Steady-state P_N at the low and high two-photon resonances.
    pub p_n_at_resonances: [f64; 2],
    /// Mean of `p_n_at_resonances`.
    pub p_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerSeries {
    pub points: Vec<PowerPoint>,
}

impl PowerSeries {
    /// P_N at the strongest pump minus P_N at the weakest.
    pub fn p_n_change(&self) -> f64 {
        let p = |pt: &PowerPoint| (pt.pump_rabi_hz, pt.p_n);
        let lo = self.points.iter().map(p).min_by(|a, b| a.0.total_cmp(&b.0));
        let hi = self.points.iter().map(p).max_by(|a, b| a.0.total_cmp(&b.0));
        match (lo, hi) {
            (Some(lo), Some(hi)) => hi.1 - lo.1,
            _ => 0.0,
        }
    }

    pub fn p_n(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.p_n).collect()
    }
}

/// Sweep the probe at each pump Rabi rate and evaluate P_N at the two
/// analytic two-photon resonances.
pub fn pump_power_series(cfg: &SweepConfig, pump_rabi_hz: &[f64]) -> Result<PowerSeries> {
    if pump_rabi_hz.len() < 2 {
        return Err(Error::invalid("pump_rabi_hz", "need at least two values"));
    }
    for &r in pump_rabi_hz {
        ensure_non_negative("pump_rabi_hz", r)?;
    }
    cfg.validate()?;
    let points = pump_rabi_hz
        .par_iter()
        .map(|&rabi| {
            let mut c = cfg.clone();
            c.pump.rabi_hz = rabi;
            let spectrum = cpt_sweep(&c)?;
            let report = find_dips(&spectrum)?;
            let [low, high] = c.two_photon_points();
            let pn = |detuning| -> Result<f64> {
                Ok(observables(&c.steady_state_at(detuning, 0.0)?).nuclear_polarization)
            };
            let p_n_at_resonances = [pn(low.probe_detuning_hz)?, pn(high.probe_detuning_hz)?];
            Ok(PowerPoint {
                pump_rabi_hz: rabi,
                spectrum,
                report,
                p_n: 0.5 * (p_n_at_resonances[0] + p_n_at_resonances[1]),
                p_n_at_resonances,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PowerSeries { points })
}
