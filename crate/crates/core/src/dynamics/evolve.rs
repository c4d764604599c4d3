use nalgebra::DVector;
use num_complex::Complex64;

use super::density::DensityMatrix;
use super::liouvillian::Liouvillian;
use crate::error::{ensure_finite, Error, Result};

/// Allowed drift of tr ρ over a trajectory.
const TRACE_DRIFT_TOL: f64 = 1e-8;
/// Populations below this signal an unstable step.
const NEGATIVE_POPULATION_TOL: f64 = 1e-6;

/// States sampled on a fixed time grid, starting with the initial state.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn final_state(&self) -> &DensityMatrix {
        self.states.last().expect("trajectory holds the initial state")
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Largest |tr ρ(t) − tr ρ(0)| along the trajectory.
    pub fn max_trace_drift(&self) -> f64 {
        let t0 = self.states[0].trace();
        self.states
            .iter()
            .map(|s| (s.trace() - t0).norm())
            .fold(0.0, f64::max)
    }
}

fn check_step(
    v: &DVector<Complex64>,
    dim: usize,
    trace0: Complex64,
    time: f64,
    step: f64,
) -> Result<()> {
    let unstable = |reason: String| Error::StepInstability {
        time,
        reason,
        suggested_step: step / 4.0,
    };
    if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(unstable("non-finite entries".into()));
    }
    let mut trace = Complex64::new(0.0, 0.0);
    for k in 0..dim {
        let p = v[k * (dim + 1)];
        trace += p;
        if p.re < -NEGATIVE_POPULATION_TOL {
            return Err(unstable(format!("negative population {:e}", p.re)));
        }
    }
    let drift = (trace - trace0).norm();
    if drift > TRACE_DRIFT_TOL {
        return Err(unstable(format!("trace drift {drift:e}")));
    }
    // |ρ_ij| <= 1 for any positive unit-trace matrix
    let amax = v.camax();
    if amax > 1.0 + 1e-6 {
        return Err(unstable(format!("entry magnitude {amax:e}")));
    }
    Ok(())
}

/// Fixed-step RK4 integration, calling `visit` after every step.
fn integrate<F>(l: &Liouvillian, rho0: &DensityMatrix, duration: f64, step: f64, mut visit: F) -> Result<()>
where
    F: FnMut(f64, &DVector<Complex64>),
{
    ensure_finite("step", step)?;
    ensure_finite("duration", duration)?;
    if step <= 0.0 {
        return Err(Error::invalid("step", "must be > 0"));
    }
    if duration < step {
        return Err(Error::invalid("duration", "must be >= step"));
    }
    let dim = l.dim();
    if rho0.dim() != dim {
        return Err(Error::Dimension {
            expected: dim,
            actual: rho0.dim(),
        });
    }
    let m = l.matrix();
    let steps = (duration / step - 1e-9).ceil() as usize;
    let mut v = rho0.to_vector();
    let trace0 = rho0.trace();
    let half = Complex64::new(0.5, 0.0);
    let sixth = 1.0 / 6.0;
    for i in 0..steps {
        let t = i as f64 * step;
        let h = step.min(duration - t);
        let hc = Complex64::new(h, 0.0);
        let k1 = m * &v;
        let k2 = m * (&v + &k1 * (hc * half));
        let k3 = m * (&v + &k2 * (hc * half));
        let k4 = m * (&v + &k3 * hc);
        v += (k1 + k2 * Complex64::new(2.0, 0.0) + k3 * Complex64::new(2.0, 0.0) + k4)
            * Complex64::new(h * sixth, 0.0);
        let t_next = if i + 1 == steps { duration } else { t + h };
        check_step(&v, dim, trace0, t_next, step)?;
        visit(t_next, &v);
    }
    Ok(())
}

/// Integrate `dρ/dt = L ρ` and record every step.
pub fn time_evolve(l: &Liouvillian, rho0: &DensityMatrix, duration: f64, step: f64) -> Result<Trajectory> {
    let dim = l.dim();
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![rho0.clone()],
    };
    integrate(l, rho0, duration, step, |t, v| {
        traj.times.push(t);
        traj.states.push(DensityMatrix::from_vector(v, dim));
    })?;
    Ok(traj)
}

/// Integrate `dρ/dt = L ρ` and return only the final state.
pub fn evolve_to(l: &Liouvillian, rho0: &DensityMatrix, duration: f64, step: f64) -> Result<DensityMatrix> {
    let dim = l.dim();
    let mut last = rho0.to_vector();
    integrate(l, rho0, duration, step, |_, v| last.copy_from(v))?;
    Ok(DensityMatrix::from_vector(&last, dim))
}
