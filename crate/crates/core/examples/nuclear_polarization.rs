//! Optically induced nuclear polarization against pump power, in both
//! laser configurations.

use donor_cpt::spectroscopy::{pump_power_series, ProbeGrid, SweepConfig};

fn main() -> donor_cpt::Result<()> {
    let low_energy = SweepConfig::new(ProbeGrid::centered(600e6, 5e6));
    let high_energy = low_energy.swapped_configuration();
    let powers = [2e6, 30e6, 60e6, 120e6, 240e6, 480e6];

    let a = pump_power_series(&low_energy, &powers)?;
    let b = pump_power_series(&high_energy, &powers)?;
    println!("{:>16} {:>12} {:>12}", "pump Rabi (MHz)", "P_N pump Up", "P_N pump Dn");
    for (pa, pb) in a.points.iter().zip(&b.points) {
        println!("{:>16.0} {:>+12.4} {:>+12.4}", pa.pump_rabi_hz / 1e6, pa.p_n, pb.p_n);
    }
    println!("change with power: {:+.3} / {:+.3}", a.p_n_change(), b.p_n_change());
    Ok(())
}
