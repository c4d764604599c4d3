//! Dilute-limit hyperfine parameter: linear fit of semilocal supercell values
//! in 1000/N, rigidly shifted through one hybrid-functional point.

use std::path::Path;

use donor_cpt::constants::CODATA_2018;
use donor_cpt::extrapolation::{contact_hyperfine, fit_dilute, rigid_shift_extrapolate, REFERENCE_HYPERFINE};
use donor_cpt::io::tables::read_hyperfine_points;
use donor_cpt::spin::SpinSystemConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/hyperfine_points.csv");
    let points = read_hyperfine_points(&path)?;
    let semilocal: Vec<_> = points.iter().filter(|p| p.method == "semilocal").cloned().collect();
    let anchor = points.iter().find(|p| p.method == "hybrid").expect("hybrid point in table");

    let fit = fit_dilute(&semilocal, 432)?;
    println!(
        "A(N) = {:.4} + {:.4} * 1000/N  ({} points, residual {:.2e} MHz)",
        fit.intercept_mhz, fit.slope_mhz, fit.points_used, fit.residual_norm_mhz
    );
    let a_inf = rigid_shift_extrapolate(&fit, anchor)?;
    println!("shifted through N = {}: A = {a_inf:.3} MHz", anchor.atoms);

    let g_sn = SpinSystemConfig::default().g_nuclear;
    let sigma = a_inf / contact_hyperfine(g_sn.abs(), 1.0, &CODATA_2018);
    println!("implied spin density at the nucleus {sigma:.4} a0^-3");

    for r in REFERENCE_HYPERFINE {
        println!("{:<6} {:<6} theory {:>6.1}  experiment {:>6.1} MHz", r.donor, r.isotope, r.theory_mhz, r.experiment_mhz);
    }
    Ok(())
}
