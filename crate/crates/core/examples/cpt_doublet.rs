//! Probe sweep across both two-photon resonances. The dark-resonance dips
//! are separated by |A|.

use std::time::Instant;

use donor_cpt::spectroscopy::{cpt_sweep, extract_hyperfine, find_dips, ProbeGrid, SweepConfig};

fn main() -> donor_cpt::Result<()> {
    let cfg = SweepConfig::new(ProbeGrid::new(-1.0e9, 0.999e9, 1.0e6));
    let t = Instant::now();
    let spectrum = cpt_sweep(&cfg)?;
    let elapsed = t.elapsed();
    let report = find_dips(&spectrum)?;

    println!("{} probe points in {:.2?}", spectrum.len(), elapsed);
    for tp in &spectrum.two_photon {
        println!("two-photon {:?}n at {:+.1} MHz", tp.nucleus, tp.probe_detuning_hz / 1e6);
    }
    for dip in &report.dips {
        println!(
            "dip at {:+.2} MHz  depth {:.3}  {:?}",
            dip.position_hz / 1e6,
            dip.depth,
            dip.nucleus
        );
    }
    let a = extract_hyperfine(&report)?;
    println!("|A| = {:.2} MHz (set {:.0} MHz)", a / 1e6, cfg.system.hyperfine_hz.abs() / 1e6);
    Ok(())
}
