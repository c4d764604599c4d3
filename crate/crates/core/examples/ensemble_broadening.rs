//! Inhomogeneous broadening of the optical line washes out the one-photon
//! background while the two-photon dips survive.

use donor_cpt::spectroscopy::{cpt_sweep, find_dips, gauss_hermite, ProbeGrid, SweepConfig};

fn main() -> donor_cpt::Result<()> {
    let (x, w) = gauss_hermite(5)?;
    println!("5-point Gauss-Hermite nodes {x:.4?}");
    println!("weights {w:.4?}");

    let mut cfg = SweepConfig::new(ProbeGrid::centered(500e6, 5e6));
    for fwhm in [0.0, 1e9, 5e9] {
        cfg.inhomogeneous_fwhm_hz = fwhm;
        let s = cpt_sweep(&cfg)?;
        let r = find_dips(&s)?;
        let peak = s.signal.iter().cloned().fold(0.0, f64::max);
        println!(
            "fwhm {:>5.1} GHz  peak signal {:.3e}  dips {}  separation {:?} MHz",
            fwhm / 1e9,
            peak,
            r.dips.len(),
            r.separation_hz.map(|h| (h / 1e4).round() / 100.0)
        );
    }
    Ok(())
}
