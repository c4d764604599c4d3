use serde::Serialize;

use super::sweep::Spectrum;
use crate::error::{Error, Result};
use crate::spin::NuclearSpin;

/// A local minimum of the signal below its smoothed baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dip {
    /// Parabola-refined position, Hz.
    pub position_hz: f64,
    /// Fractional depth below the local baseline.
    pub depth: f64,
    pub grid_index: usize,
    /// Nuclear sector of the nearest analytic two-photon resonance.
    pub nucleus: Option<NuclearSpin>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DipReport {
    /// Dips in order of increasing detuning.
    pub dips: Vec<Dip>,
    /// Distance between the dips when exactly two were found, Hz.
    pub separation_hz: Option<f64>,
    /// (d_low − d_high)/(d_low + d_high) for exactly two dips.
    pub amplitude_asymmetry: Option<f64>,
    /// (d↑n − d↓n)/(d↑n + d↓n) when the two dips carry distinct nuclear labels.
    pub p_n_proxy: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipOptions {
    /// Median-filter window for the baseline, Hz. `None` uses an eighth of the
    /// spectrum.
    pub baseline_window_hz: Option<f64>,
    /// Dips shallower than this fraction of the baseline are ignored.
    pub min_depth: f64,
}

impl Default for DipOptions {
    fn default() -> Self {
        Self {
            baseline_window_hz: None,
            min_depth: 0.02,
        }
    }
}

fn median_filter(y: &[f64], half: usize) -> Vec<f64> {
    let n = y.len();
    let mut buf = Vec::with_capacity(2 * half + 1);
    (0..n)
        .map(|i| {
            buf.clear();
            buf.extend_from_slice(&y[i.saturating_sub(half)..(i + half + 1).min(n)]);
            buf.sort_by(|a, b| a.total_cmp(b));
            let m = buf.len();
            if m % 2 == 1 {
                buf[m / 2]
            } else {
                0.5 * (buf[m / 2 - 1] + buf[m / 2])
            }
        })
        .collect()
}

/// Vertex of the parabola through three points, clamped to their span.
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> f64 {
    let (u0, u2) = (x[0] - x[1], x[2] - x[1]);
    let (d0, d2) = (y[0] - y[1], y[2] - y[1]);
    let denom = u0 * d2 - u2 * d0;
    let num = u0 * u0 * d2 - u2 * u2 * d0;
    if denom == 0.0 {
        return x[1];
    }
    (x[1] + 0.5 * num / denom).clamp(x[0], x[2])
}

/// Dips with the baseline window set to ten expected dip widths.
pub fn find_dips(s: &Spectrum) -> Result<DipReport> {
    let opts = DipOptions {
        baseline_window_hz: s.expected_dip_width_hz.map(|w| 10.0 * w),
        ..DipOptions::default()
    };
    find_dips_with(s, &opts)
}

pub fn find_dips_with(s: &Spectrum, opts: &DipOptions) -> Result<DipReport> {
    let n = s.len();
    if n < 5 {
        return Err(Error::invalid("spectrum", format!("needs at least 5 points, got {n}")));
    }
    let x = &s.probe_detunings_hz;
    let y = &s.signal;
    let mean_step = (x[n - 1] - x[0]) / (n - 1) as f64;
    let window_pts = match opts.baseline_window_hz {
        Some(w) if w > 0.0 => (w / mean_step).round() as usize,
        _ => n / 8,
    };
    let half = (window_pts / 2).clamp(1, (n - 1) / 2);
    let baseline = median_filter(y, half);
    let deficit: Vec<f64> = y
        .iter()
        .zip(&baseline)
        .map(|(v, b)| if *b > 0.0 { 1.0 - v / b } else { 0.0 })
        .collect();

    let mut dips = Vec::new();
    for i in 1..n - 1 {
        if y[i] < y[i - 1] && y[i] <= y[i + 1] && deficit[i] >= opts.min_depth {
            let position_hz = parabola_vertex([x[i - 1], x[i], x[i + 1]], [y[i - 1], y[i], y[i + 1]]);
            dips.push(Dip {
                position_hz,
                depth: deficit[i],
                grid_index: i,
                nucleus: s.nucleus_near(position_hz),
            });
        }
    }

    let (mut separation_hz, mut amplitude_asymmetry, mut p_n_proxy) = (None, None, None);
    if let [low, high] = dips[..] {
        separation_hz = Some(high.position_hz - low.position_hz);
        amplitude_asymmetry = Some((low.depth - high.depth) / (low.depth + high.depth));
        p_n_proxy = match (low.nucleus, high.nucleus) {
            (Some(NuclearSpin::Up), Some(NuclearSpin::Down)) => amplitude_asymmetry,
            (Some(NuclearSpin::Down), Some(NuclearSpin::Up)) => amplitude_asymmetry.map(|a| -a),
            _ => None,
        };
    }
    Ok(DipReport {
        dips,
        separation_hz,
        amplitude_asymmetry,
        p_n_proxy,
    })
}

/// Hyperfine constant magnitude from a two-dip report, Hz.
pub fn extract_hyperfine(report: &DipReport) -> Result<f64> {
    match report.separation_hz {
        Some(sep) if report.dips.len() == 2 => Ok(sep),
        _ => Err(Error::DipCount(report.dips.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectroscopy::sweep::TwoPhotonPoint;

    fn lorentzian_dips(centers: &[(f64, f64)], width: f64, step: f64) -> Spectrum {
        let x: Vec<f64> = (0..=1000).map(|i| -500.0 + i as f64 * step).collect();
        let y = x
            .iter()
            .map(|&xi| {
                1.0 - centers
                    .iter()
                    .map(|(c, d)| d / (1.0 + ((xi - c) / (0.5 * width)).powi(2)))
                    .sum::<f64>()
            })
            .collect();
        Spectrum::new(x, y).unwrap()
    }

    #[test]
    fn recovers_synthetic_centers() {
        let step = 1.0;
        let s = lorentzian_dips(&[(-196.37, 0.5), (195.81, 0.3)], 20.0, step);
        let r = find_dips(&s).unwrap();
        assert_eq!(r.dips.len(), 2);
        assert!((r.dips[0].position_hz + 196.37).abs() < step / 10.0, "{:?}", r.dips[0]);
        assert!((r.dips[1].position_hz - 195.81).abs() < step / 10.0, "{:?}", r.dips[1]);
        assert!((extract_hyperfine(&r).unwrap() - 392.18).abs() < step / 5.0);
        assert!(r.amplitude_asymmetry.unwrap() > 0.0);
        assert_eq!(r.p_n_proxy, None);
    }

    #[test]
    fn monotone_signal_has_no_dips() {
        let x: Vec<f64> = (0..50).map(f64::from).collect();
        let s = Spectrum::new(x.clone(), x.iter().map(|v| v * v).collect()).unwrap();
        let r = find_dips(&s).unwrap();
        assert!(r.dips.is_empty());
        assert!(matches!(extract_hyperfine(&r), Err(Error::DipCount(0))));
    }

    #[test]
    fn equal_dips_are_symmetric() {
        let mut s = lorentzian_dips(&[(-100.0, 0.4), (100.0, 0.4)], 10.0, 1.0);
        s.two_photon = vec![
            TwoPhotonPoint {
                nucleus: NuclearSpin::Up,
                probe_detuning_hz: -100.0,
            },
            TwoPhotonPoint {
                nucleus: NuclearSpin::Down,
                probe_detuning_hz: 100.0,
            },
        ];
        let r = find_dips(&s).unwrap();
        assert!(r.amplitude_asymmetry.unwrap().abs() < 1e-12);
        assert!(r.p_n_proxy.unwrap().abs() < 1e-12);
    }

    #[test]
    fn single_dip_is_not_a_doublet() {
        let r = find_dips(&lorentzian_dips(&[(3.0, 0.5)], 10.0, 1.0)).unwrap();
        assert_eq!(r.dips.len(), 1);
        assert!(matches!(extract_hyperfine(&r), Err(Error::DipCount(1))));
    }

    #[test]
    fn too_short_is_rejected() {
        let s = Spectrum::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0]).unwrap();
        assert!(find_dips(&s).is_err());
    }

    #[test]
    fn vertex_of_exact_parabola() {
        let f = |x: f64| 2.0 * (x - 0.3).powi(2) + 1.0;
        let v = parabola_vertex([-1.0, 0.0, 1.5], [f(-1.0), f(0.0), f(1.5)]);
        assert!((v - 0.3).abs() < 1e-14);
    }
}
