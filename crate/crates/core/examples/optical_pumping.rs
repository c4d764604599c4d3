//! Without the pump every ground population drains into the branch the probe
//! does not address, and the probe sees no absorption.

use donor_cpt::dynamics::observables;
use donor_cpt::spectroscopy::{ProbeGrid, SweepConfig};

fn main() -> donor_cpt::Result<()> {
    let pumped = SweepConfig::new(ProbeGrid::centered(400e6, 10e6));
    let mut probe_only = pumped.clone();
    probe_only.pump.rabi_hz = 0.0;

    println!("{:>12} {:>14} {:>14}", "probe (MHz)", "pumped", "probe only");
    for det in [-300e6, -196e6, 0.0, 196e6, 300e6] {
        let a = observables(&pumped.steady_state_at(det, 0.0)?);
        let b = observables(&probe_only.steady_state_at(det, 0.0)?);
        println!("{:>12.0} {:>14.4e} {:>14.4e}", det / 1e6, a.excited_total, b.excited_total);
    }
    let s = observables(&probe_only.steady_state_at(0.0, 0.0)?);
    println!("probe-only electron polarization {:+.6}", s.electron_polarization);
    Ok(())
}
