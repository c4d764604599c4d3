use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::density::{DensityMatrix, POSITIVITY_TOL};
use super::liouvillian::Liouvillian;
use crate::error::{Error, Result};

/// Relative disagreement between the two bordered solves above which the
/// kernel is declared degenerate.
const UNIQUENESS_TOL: f64 = 1e-6;

/// Solve `L vec(ρ) = 0` with one equation replaced by `tr ρ = 1`.
fn bordered_solve(l: &Liouvillian, replaced_level: usize) -> Option<DVector<Complex64>> {
    let n = l.dim();
    let row = replaced_level * (n + 1);
    let mut a: DMatrix<Complex64> = l.matrix().clone();
    // rows are rescaled so the trace row is commensurate with the rest
    let scale = a.camax().max(1.0);
    a.row_mut(row).fill(Complex64::new(0.0, 0.0));
    for k in 0..n {
        a[(row, k * (n + 1))] = Complex64::new(scale, 0.0);
    }
    let mut b = DVector::zeros(n * n);
    b[row] = Complex64::new(scale, 0.0);
    let x = a.lu().solve(&b)?;
    x.iter().all(|z| z.re.is_finite() && z.im.is_finite()).then_some(x)
}

/// Unique stationary state of `L`.
///
/// The kernel is checked by solving two borderings that replace different
/// population equations; they agree only when the kernel is one-dimensional.
pub fn steady_state(l: &Liouvillian) -> Result<DensityMatrix> {
    let n = l.dim();
    if n == 0 {
        return Err(Error::Dimension { expected: 1, actual: 0 });
    }
    let first = bordered_solve(l, 0)
        .ok_or_else(|| Error::NonUniqueSteadyState("bordered system is singular".into()))?;
    if n > 1 {
        let second = bordered_solve(l, n - 1)
            .ok_or_else(|| Error::NonUniqueSteadyState("bordered system is singular".into()))?;
        let diff = (&first - &second).camax();
        let size = first.camax().max(second.camax());
        if !(diff <= UNIQUENESS_TOL * size) || size > 1.0 + 1e-6 {
            return Err(Error::NonUniqueSteadyState(format!(
                "independent borderings disagree by {diff:e}"
            )));
        }
    }
    let raw = DMatrix::from_column_slice(n, n, first.as_slice());
    let mut rho = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    let tr = rho.trace();
    rho /= tr;
    let dm = DensityMatrix::from_raw(rho);
    let min = dm.min_eigenvalue();
    if min < -POSITIVITY_TOL {
        return Err(Error::NotPositive(min));
    }
    Ok(dm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::frame::{assemble_rotating_frame, DriveSpec};
    use crate::dynamics::liouvillian::{build_liouvillian, DissipatorSpec};
    use crate::spin::{Branch, Level, NuclearSpin, SpinSystemConfig};

    fn liouvillian(pump: f64, probe: f64, probe_detuning: f64, dis: &DissipatorSpec) -> Liouvillian {
        let f = assemble_rotating_frame(
            &SpinSystemConfig::default(),
            &DriveSpec::new(Branch::Up, pump, 0.0),
            &DriveSpec::new(Branch::Down, probe, probe_detuning),
        )
        .unwrap();
        build_liouvillian(&f, dis).unwrap()
    }

    #[test]
    fn zero_rates_are_reported() {
        let l = liouvillian(10e6, 10e6, 0.0, &DissipatorSpec::none());
        assert!(matches!(steady_state(&l), Err(Error::NonUniqueSteadyState(_))));
        let l = liouvillian(0.0, 0.0, 0.0, &DissipatorSpec::none());
        assert!(matches!(steady_state(&l), Err(Error::NonUniqueSteadyState(_))));
    }

    #[test]
    fn disconnected_nuclear_sectors_are_reported() {
        // no flip-flops and no nuclear flips: each nuclear sector keeps its weight
        let dis = DissipatorSpec {
            w_flipflop_down_hz: 0.0,
            w_flipflop_up_hz: 0.0,
            ..DissipatorSpec::reference()
        };
        let l = liouvillian(10e6, 10e6, 0.0, &dis);
        assert!(matches!(steady_state(&l), Err(Error::NonUniqueSteadyState(_))));
    }

    #[test]
    fn undriven_relaxation_matches_rate_equations() {
        // independent 4-state classical rate problem, solved by hand:
        // ↑↑ ↔ ↓↑ and ↑↓ ↔ ↓↓ at r each way, ↑↓ → ↓↑ at wd, ↓↑ → ↑↓ at wu
        let dis = DissipatorSpec {
            gamma_e_relax_hz: 4.0,
            w_flipflop_down_hz: 1.0,
            w_flipflop_up_hz: 3.0,
            ..DissipatorSpec::reference()
        };
        let rho = steady_state(&liouvillian(0.0, 0.0, 0.0, &dis)).unwrap();
        let (wd, wu) = (1.0, 3.0);
        // the transition graph ↑↑ – ↓↑ – ↑↓ – ↓↓ is a path, so detailed balance
        // holds: p(↓↑) = p(↑↑), p(↑↓) = p(↓↓), wd p(↑↓) = wu p(↓↑)
        let up_n = wd / (wd + wu); // weight of the ↑n sector
        let expect = [up_n / 2.0, (1.0 - up_n) / 2.0, up_n / 2.0, (1.0 - up_n) / 2.0, 0.0, 0.0];
        for (level, want) in Level::ALL.iter().zip(expect) {
            assert!((rho.population(*level) - want).abs() < 1e-9, "{level:?}");
        }
    }

    #[test]
    fn probe_only_pumps_into_dark_branch() {
        let dis = DissipatorSpec {
            gamma_e_relax_hz: 0.0,
            w_flipflop_down_hz: 0.0,
            w_flipflop_up_hz: 0.0,
            w_nuc_flip_hz: 1.0,
            ..DissipatorSpec::reference()
        };
        let rho = steady_state(&liouvillian(0.0, 20e6, 0.0, &dis)).unwrap();
        let excited = rho.population(Level::ExcitedUpN) + rho.population(Level::ExcitedDownN);
        assert!(excited < 1e-12, "{excited}");
        let up: f64 = NuclearSpin::BOTH
            .iter()
            .map(|m| rho.population(Level::ground(Branch::Up, *m)))
            .sum();
        assert!((up - 1.0).abs() < 1e-9);
    }

    #[test]
    fn steady_state_is_valid() {
        let l = liouvillian(50e6, 20e6, -190e6, &DissipatorSpec::reference());
        let rho = steady_state(&l).unwrap();
        assert!((rho.trace().re - 1.0).abs() < 1e-12);
        assert!(rho.hermiticity_error() == 0.0);
        assert!(rho.min_eigenvalue() > -1e-9);
        assert!(l.relative_residual(&rho) < 1e-9, "{}", l.relative_residual(&rho));
    }
}
