//! Ground and excited levels of the Sn-Li donor at 6 T and the four
//! nuclear-spin-conserving optical transitions.

use donor_cpt::spin::{equilibrium_nuclear_polarization, optical_transitions, Branch, NuclearSpin, SpinSystemConfig};

fn main() -> donor_cpt::Result<()> {
    let cfg = SpinSystemConfig::default();
    cfg.validate()?;
    let d = optical_transitions(&cfg);

    println!("electron Zeeman  {:>14.6e} Hz", cfg.electron_zeeman_hz());
    println!("nuclear Zeeman   {:>14.6e} Hz", cfg.nuclear_zeeman_hz());
    for l in d.ground_levels.iter().chain(d.excited_levels.iter()) {
        println!("{:<14} {:>16.6e} Hz", format!("{:?}", l.level), l.energy_hz);
    }
    for b in [Branch::Up, Branch::Down] {
        for n in NuclearSpin::BOTH {
            println!(
                "{b:?}e {n:?}n  offset from branch mean {:>10.3} MHz",
                d.transition_offset(b, n) / 1e6
            );
        }
    }
    println!("doublet spacing {:.3} MHz", d.doublet_spacing() / 1e6);

    let p_eq = equilibrium_nuclear_polarization(&cfg, 8.0)?;
    println!("thermal P_N at 8 K: {p_eq:.3e}");
    println!("enhancement needed for |P_N| = 0.5: {:.0}", 0.5 / p_eq.abs());
    Ok(())
}
