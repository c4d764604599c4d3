//! Transient approach to the dark state, integrated with RK4 and compared
//! with the directly solved steady state.

use donor_cpt::dynamics::{
    assemble_rotating_frame, build_liouvillian, evolve_to, observables, steady_state, time_evolve, DensityMatrix, DissipatorSpec,
    DriveSpec,
};
use donor_cpt::spin::{Branch, SpinSystemConfig};

fn main() -> donor_cpt::Result<()> {
    let cfg = SpinSystemConfig::default();
    let pump = DriveSpec::new(Branch::Up, 50e6, 0.0);
    let probe = DriveSpec::new(Branch::Down, 50e6, 196e6);
    let mut rates = DissipatorSpec::reference();
    // fast ground relaxation keeps the transient at the microsecond scale
    rates.gamma_e_relax_hz = 2e6;
    rates.w_flipflop_up_hz = 1e6;
    rates.w_flipflop_down_hz = 1e6;

    let frame = assemble_rotating_frame(&cfg, &pump, &probe)?;
    let l = build_liouvillian(&frame, &rates)?;
    let step = l.default_step().unwrap_or(1e-10);

    let first = time_evolve(&l, &DensityMatrix::maximally_mixed(6), 50e-9, step)?;
    println!("{} RK4 steps of {:.2e} s, trace drift {:.2e}", first.len() - 1, step, first.max_trace_drift());

    let mut rho = first.final_state().clone();
    let mut t = 50e-9;
    while t < 20e-6 {
        let o = observables(&rho);
        println!(
            "t = {:>8.3} us  excited {:.3e}  P_e {:+.4}  P_N {:+.4}",
            t * 1e6,
            o.excited_total,
            o.electron_polarization,
            o.nuclear_polarization
        );
        rho = evolve_to(&l, &rho, 2.0 * t, step)?;
        t *= 3.0;
    }
    let ss = steady_state(&l)?;
    println!("distance to steady state {:.2e}", rho.distance(&ss));
    println!("steady-state residual {:.2e}", l.relative_residual(&ss));
    Ok(())
}
