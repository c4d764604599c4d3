#![allow(dead_code)]

use donor_cpt::dynamics::{
    assemble_rotating_frame, build_liouvillian, evolve_to, DensityMatrix, DissipatorSpec, DriveSpec, Liouvillian,
};
use donor_cpt::spin::{Branch, SpinSystemConfig};
use rand::Rng;

/// A random six-level model with every rate, Rabi frequency and detuning at
/// the MHz scale, so that direct integration reaches the steady state quickly.
#[derive(Debug, Clone)]
pub struct RandomModel {
    pub system: SpinSystemConfig,
    pub pump: DriveSpec,
    pub probe: DriveSpec,
    pub rates: DissipatorSpec,
}

impl RandomModel {
    pub fn draw<R: Rng>(rng: &mut R) -> Self {
        let system = SpinSystemConfig {
            hyperfine_hz: rng.gen_range(-30e6..30e6),
            field_tesla: rng.gen_range(0.0..0.5),
            ..SpinSystemConfig::default()
        };
        let pump_branch = if rng.gen_bool(0.5) { Branch::Up } else { Branch::Down };
        let pump = DriveSpec::new(pump_branch, rng.gen_range(1e6..20e6), rng.gen_range(-20e6..20e6));
        let probe = DriveSpec::new(pump_branch.opposite(), rng.gen_range(1e6..20e6), rng.gen_range(-20e6..20e6));
        let rates = DissipatorSpec {
            gamma_rad_hz: rng.gen_range(2e6..10e6),
            branching_up: rng.gen_range(0.1..0.9),
            gamma_deph_opt_hz: rng.gen_range(0.0..10e6),
            gamma_e_relax_hz: rng.gen_range(0.5e6..3e6),
            w_flipflop_down_hz: rng.gen_range(0.5e6..3e6),
            w_flipflop_up_hz: rng.gen_range(0.5e6..3e6),
            w_nuc_flip_hz: rng.gen_range(0.0..1e6),
        };
        Self {
            system,
            pump,
            probe,
            rates,
        }
    }

    pub fn liouvillian(&self) -> Liouvillian {
        let frame = assemble_rotating_frame(&self.system, &self.pump, &self.probe).expect("valid frame");
        build_liouvillian(&frame, &self.rates).expect("valid rates")
    }
}

/// Integrate in chunks until successive chunk ends agree to `tol`.
/// Returns the final state and the total time integrated.
pub fn integrate_to_convergence(l: &Liouvillian, rho0: &DensityMatrix, chunk: f64, tol: f64) -> (DensityMatrix, f64) {
    let step = l.default_step().expect("non-zero generator");
    let mut rho = rho0.clone();
    let mut t = 0.0;
    for _ in 0..200 {
        let next = evolve_to(l, &rho, chunk, step).expect("stable step");
        t += chunk;
        let change = next.distance(&rho);
        rho = next;
        if change < tol {
            break;
        }
    }
    (rho, t)
}
