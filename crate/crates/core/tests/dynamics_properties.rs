mod common;

use donor_cpt::dynamics::{
    assemble_rotating_frame, build_liouvillian, observables, steady_state, time_evolve, DensityMatrix, DissipatorSpec,
    DriveSpec,
};
use donor_cpt::spin::{Branch, SpinSystemConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::RandomModel;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn trajectories_keep_trace_and_hermiticity(seed in any::<u64>()) {
        let model = RandomModel::draw(&mut ChaCha8Rng::seed_from_u64(seed));
        let l = model.liouvillian();
        let traj = time_evolve(&l, &DensityMatrix::maximally_mixed(6), 0.2e-6, l.default_step().unwrap()).unwrap();
        prop_assert!(traj.max_trace_drift() < 1e-8);
        for s in &traj.states {
            prop_assert!(s.hermiticity_error() < 1e-10);
        }
    }

    #[test]
    fn steady_states_are_physical(seed in any::<u64>()) {
        let model = RandomModel::draw(&mut ChaCha8Rng::seed_from_u64(seed));
        let l = model.liouvillian();
        let ss = steady_state(&l).unwrap();
        prop_assert!((ss.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(ss.min_eigenvalue() >= -1e-9);
        prop_assert!(l.relative_residual(&ss) < 1e-9);
    }

    #[test]
    fn no_hyperfine_means_no_nuclear_polarization(rabi in 1e6..5e7f64, det in -3e7..3e7f64, b in 0.0..8.0f64,
                                                  flip in 1e5..1e7f64, relax in 1e5..1e7f64) {
        let system = SpinSystemConfig { hyperfine_hz: 0.0, field_tesla: b, ..SpinSystemConfig::default() };
        let rates = DissipatorSpec {
            gamma_rad_hz: 5e6,
            gamma_deph_opt_hz: 5e6,
            branching_up: 0.5,
            gamma_e_relax_hz: relax,
            w_flipflop_down_hz: flip,
            w_flipflop_up_hz: flip,
            ..DissipatorSpec::reference()
        };
        let frame = assemble_rotating_frame(
            &system,
            &DriveSpec::new(Branch::Up, rabi, det),
            &DriveSpec::new(Branch::Down, rabi, -det),
        ).unwrap();
        let ss = steady_state(&build_liouvillian(&frame, &rates).unwrap()).unwrap();
        prop_assert!(observables(&ss).nuclear_polarization.abs() < 1e-9);
    }

    #[test]
    fn swapped_configuration_mirrors_the_state(seed in any::<u64>()) {
        let model = RandomModel::draw(&mut ChaCha8Rng::seed_from_u64(seed));
        let frame = assemble_rotating_frame(&model.system, &model.pump, &model.probe).unwrap();
        let swapped = assemble_rotating_frame(
            &model.system,
            &DriveSpec { branch: model.pump.branch.opposite(), ..model.pump },
            &DriveSpec { branch: model.probe.branch.opposite(), ..model.probe },
        ).unwrap();
        let a = steady_state(&build_liouvillian(&frame, &model.rates).unwrap()).unwrap();
        let b = steady_state(&build_liouvillian(&swapped, &model.rates.mirrored()).unwrap()).unwrap();
        prop_assert!(a.mirrored().distance(&b) < 1e-10);
        let (pa, pb) = (observables(&a).nuclear_polarization, observables(&b).nuclear_polarization);
        prop_assert!((pa + pb).abs() < 1e-10);
    }
}
