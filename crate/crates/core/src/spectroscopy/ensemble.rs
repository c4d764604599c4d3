use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;

use super::sweep::{Spectrum, SweepConfig};
use crate::error::{ensure_finite, Error, Result};

/// Quadrature for an expectation over a centred Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNodes {
    pub shifts_hz: Vec<f64>,
    /// Sum to one.
    pub weights: Vec<f64>,
}

/// Gauss–Hermite nodes and weights for `∫ f(x) e^{−x²} dx`, via the
/// Golub–Welsch eigenproblem. Nodes ascend and are exactly antisymmetric.
pub fn gauss_hermite(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n == 0 {
        return Err(Error::invalid("ensemble_samples", "must be > 0"));
    }
    let mut jacobi = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eig = SymmetricEigen::new(jacobi);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], std::f64::consts::PI.sqrt() * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nodes: Vec<f64> = (0..n).map(|i| 0.5 * (pairs[i].0 - pairs[n - 1 - i].0)).collect();
    let weights: Vec<f64> = (0..n).map(|i| 0.5 * (pairs[i].1 + pairs[n - 1 - i].1)).collect();
    Ok((nodes, weights))
}

impl GaussianNodes {
    /// `n`-point rule for a Gaussian of full width at half maximum `fwhm_hz`.
    pub fn new(fwhm_hz: f64, n: usize) -> Result<Self> {
        ensure_finite("inhomogeneous_fwhm_hz", fwhm_hz)?;
        if fwhm_hz <= 0.0 {
            return Err(Error::invalid("inhomogeneous_fwhm_hz", "must be > 0"));
        }
        if n < 3 {
            return Err(Error::invalid("ensemble_samples", "must be >= 3"));
        }
        let sigma = fwhm_hz / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
        let (x, w) = gauss_hermite(n)?;
        let norm = std::f64::consts::PI.sqrt();
        Ok(Self {
            shifts_hz: x.iter().map(|xi| std::f64::consts::SQRT_2 * sigma * xi).collect(),
            weights: w.iter().map(|wi| wi / norm).collect(),
        })
    }
}

/// Average spectra produced by `generator(shift_hz)` over a Gaussian
/// common-mode shift of the optical line.
pub fn ensemble_average<F>(cfg: &SweepConfig, generator: F) -> Result<Spectrum>
where
    F: Fn(f64) -> Result<Spectrum> + Sync,
{
    let nodes = GaussianNodes::new(cfg.inhomogeneous_fwhm_hz, cfg.ensemble_samples)?;
    let spectra = nodes
        .shifts_hz
        .par_iter()
        .map(|&s| generator(s))
        .collect::<Result<Vec<_>>>()?;
    let first = &spectra[0];
    let mut signal = vec![0.0; first.len()];
    for (spec, w) in spectra.iter().zip(&nodes.weights) {
        if spec.probe_detunings_hz != first.probe_detunings_hz {
            return Err(Error::invalid("generator", "spectra must share one probe grid"));
        }
        for (acc, v) in signal.iter_mut().zip(&spec.signal) {
            *acc += w * v;
        }
    }
    Ok(Spectrum {
        probe_detunings_hz: first.probe_detunings_hz.clone(),
        signal,
        two_photon: cfg.two_photon_points().to_vec(),
        expected_dip_width_hz: cfg.expected_dip_width_hz(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectroscopy::sweep::ProbeGrid;

    #[test]
    fn three_point_rule_is_known() {
        let (x, w) = gauss_hermite(3).unwrap();
        let s = 1.5f64.sqrt();
        assert!((x[0] + s).abs() < 1e-14 && x[1] == 0.0 && (x[2] - s).abs() < 1e-14);
        let pi = std::f64::consts::PI.sqrt();
        assert!((w[1] - 2.0 * pi / 3.0).abs() < 1e-14);
        assert!((w[0] - pi / 6.0).abs() < 1e-14);
    }

    #[test]
    fn moments_of_a_gaussian() {
        // E[x²] = σ², E[x⁴] = 3σ⁴
        let nodes = GaussianNodes::new(2.0 * (2.0 * std::f64::consts::LN_2).sqrt(), 21).unwrap();
        let m = |k: i32| -> f64 { nodes.shifts_hz.iter().zip(&nodes.weights).map(|(x, w)| w * x.powi(k)).sum() };
        assert!((m(0) - 1.0).abs() < 1e-13);
        assert!(m(1).abs() < 1e-13);
        assert!((m(2) - 1.0).abs() < 1e-12);
        assert!((m(4) - 3.0).abs() < 1e-11);
    }

    #[test]
    fn rejects_few_samples() {
        assert!(GaussianNodes::new(1e9, 2).is_err());
        assert!(GaussianNodes::new(0.0, 21).is_err());
    }

    #[test]
    fn constant_generator_is_unchanged() {
        let mut cfg = SweepConfig::new(ProbeGrid::new(0.0, 4.0, 1.0));
        cfg.inhomogeneous_fwhm_hz = 1e9;
        let s = ensemble_average(&cfg, |_| Spectrum::new(vec![0.0, 1.0, 2.0], vec![1.0, 2.0, 3.0])).unwrap();
        for (a, b) in s.signal.iter().zip([1.0, 2.0, 3.0]) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
