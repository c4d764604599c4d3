//! Lindblad superoperator on column-stacked density matrices.
//!
//! `dρ/dt = −2πi [H, ρ] + Σ_k 2π γ_k (c_k ρ c_k† − ½{c_k† c_k, ρ})`
//!
//! with H in Hz and rates γ_k in Hz. With `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`:
//!
//! `L = −2πi (I ⊗ H − Hᵀ ⊗ I) + Σ_k 2π γ_k (c̄_k ⊗ c_k − ½ I ⊗ c_k†c_k − ½ (c_k†c_k)ᵀ ⊗ I)`

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::{DensityMatrix, LEVELS};
use super::frame::{DriveSpec, RotatingFrame};
use crate::error::{ensure_non_negative, Error, Result};
use crate::spin::{Branch, Level, NuclearSpin};

/// Incoherent channels of the donor model. All rates in Hz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DissipatorSpec {
    /// Radiative decay of the exciton, nuclear-spin conserving.
    pub gamma_rad_hz: f64,
    /// Fraction of radiative decay ending in the ↑e branch.
    pub branching_up: f64,
    /// Extra decay rate of optical coherences (pure dephasing of the exciton).
    pub gamma_deph_opt_hz: f64,
    /// Electron T1⁻¹ between ground branches, split evenly between both directions.
    pub gamma_e_relax_hz: f64,
    /// |↑e↓n⟩ → |↓e↑n⟩.
    pub w_flipflop_down_hz: f64,
    /// |↓e↑n⟩ → |↑e↓n⟩.
    pub w_flipflop_up_hz: f64,
    /// Bare nuclear flip, each direction.
    pub w_nuc_flip_hz: f64,
}

impl Default for DissipatorSpec {
    fn default() -> Self {
        Self::reference()
    }
}

impl DissipatorSpec {
    /// Reference rate set used by the examples and the acceptance suite.
    ///
    /// Optical channels are GHz-scale (lifetime-limited decay plus strong
    /// exciton dephasing), ground-state channels are Hz-scale (electron T1 of
    /// 0.5 s, flip-flops at 1 Hz). Flip-flops are symmetric, so nuclear
    /// polarization follows the optically pumped electron polarization.
    pub fn reference() -> Self {
        Self {
            gamma_rad_hz: 100e6,
            branching_up: 0.5,
            gamma_deph_opt_hz: 500e6,
            gamma_e_relax_hz: 2.0,
            w_flipflop_down_hz: 1.0,
            w_flipflop_up_hz: 1.0,
            w_nuc_flip_hz: 0.0,
        }
    }

    /// All channels off.
    pub fn none() -> Self {
        Self {
            gamma_rad_hz: 0.0,
            branching_up: 0.5,
            gamma_deph_opt_hz: 0.0,
            gamma_e_relax_hz: 0.0,
            w_flipflop_down_hz: 0.0,
            w_flipflop_up_hz: 0.0,
            w_nuc_flip_hz: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_non_negative("gamma_rad_hz", self.gamma_rad_hz)?;
        ensure_non_negative("gamma_deph_opt_hz", self.gamma_deph_opt_hz)?;
        ensure_non_negative("gamma_e_relax_hz", self.gamma_e_relax_hz)?;
        ensure_non_negative("w_flipflop_down_hz", self.w_flipflop_down_hz)?;
        ensure_non_negative("w_flipflop_up_hz", self.w_flipflop_up_hz)?;
        ensure_non_negative("w_nuc_flip_hz", self.w_nuc_flip_hz)?;
        ensure_non_negative("branching_up", self.branching_up)?;
        if self.branching_up > 1.0 {
            return Err(Error::invalid("branching_up", "must lie in [0, 1]"));
        }
        Ok(())
    }

    /// Image under ↑e↔↓e, ↑n↔↓n.
    pub fn mirrored(&self) -> Self {
        Self {
            branching_up: 1.0 - self.branching_up,
            w_flipflop_down_hz: self.w_flipflop_up_hz,
            w_flipflop_up_hz: self.w_flipflop_down_hz,
            ..*self
        }
    }

    /// Collapse channels for the six-level model.
    pub fn channels(&self) -> Vec<CollapseChannel> {
        let mut out = Vec::new();
        let mut push = |to: Level, from: Level, rate: f64| {
            if rate > 0.0 {
                out.push(CollapseChannel::transition(LEVELS, to, from, rate));
            }
        };
        for m in NuclearSpin::BOTH {
            let x = Level::excited(m);
            push(Level::ground(Branch::Up, m), x, self.gamma_rad_hz * self.branching_up);
            push(Level::ground(Branch::Down, m), x, self.gamma_rad_hz * (1.0 - self.branching_up));
            let (up, down) = (Level::ground(Branch::Up, m), Level::ground(Branch::Down, m));
            push(down, up, 0.5 * self.gamma_e_relax_hz);
            push(up, down, 0.5 * self.gamma_e_relax_hz);
        }
        push(Level::DownEUpN, Level::UpEDownN, self.w_flipflop_down_hz);
        push(Level::UpEDownN, Level::DownEUpN, self.w_flipflop_up_hz);
        for (a, b) in [
            (Level::UpEUpN, Level::UpEDownN),
            (Level::DownEUpN, Level::DownEDownN),
            (Level::ExcitedUpN, Level::ExcitedDownN),
        ] {
            push(a, b, self.w_nuc_flip_hz);
            push(b, a, self.w_nuc_flip_hz);
        }
        if self.gamma_deph_opt_hz > 0.0 {
            // D[P] damps coherences of P at half the channel rate
            for m in NuclearSpin::BOTH {
                let x = Level::excited(m);
                out.push(CollapseChannel::transition(LEVELS, x, x, 2.0 * self.gamma_deph_opt_hz));
            }
        }
        out
    }
}

/// Jump operator `c` with rate `rate_hz` (the superoperator uses 2π·rate).
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseChannel {
    pub operator: DMatrix<Complex64>,
    pub rate_hz: f64,
}

impl CollapseChannel {
    /// `|to⟩⟨from|` in a `dim`-level space.
    pub fn transition(dim: usize, to: Level, from: Level, rate_hz: f64) -> Self {
        let mut operator = DMatrix::zeros(dim, dim);
        operator[(to.index(), from.index())] = Complex64::new(1.0, 0.0);
        Self { operator, rate_hz }
    }
}

/// Frame and channels a Liouvillian was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct LiouvillianMeta {
    pub pump: DriveSpec,
    pub probe: DriveSpec,
    pub dissipators: DissipatorSpec,
}

/// Superoperator acting on column-stacked density matrices, in s⁻¹.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    matrix: DMatrix<Complex64>,
    dim: usize,
    meta: Option<LiouvillianMeta>,
}

fn kron(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    a.kronecker(b)
}

impl Liouvillian {
    /// Generic Lindblad generator for Hamiltonian `h` (Hz) and channels.
    pub fn from_parts(h: &DMatrix<Complex64>, channels: &[CollapseChannel]) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::Dimension {
                expected: h.nrows(),
                actual: h.ncols(),
            });
        }
        let scale = h.camax().max(1.0);
        let herm = (h - h.adjoint()).camax();
        if herm > 1e-12 * scale {
            return Err(Error::NotHermitian(herm));
        }
        let n = h.nrows();
        let id = DMatrix::<Complex64>::identity(n, n);
        let mut l = (kron(&id, h) - kron(&h.transpose(), &id)) * Complex64::new(0.0, -TAU);
        for ch in channels {
            ensure_non_negative("rate_hz", ch.rate_hz)?;
            if ch.operator.shape() != (n, n) {
                return Err(Error::Dimension {
                    expected: n,
                    actual: ch.operator.nrows(),
                });
            }
            if ch.rate_hz == 0.0 {
                continue;
            }
            let c = &ch.operator;
            let cdc = c.adjoint() * c;
            let d = kron(&c.conjugate(), c)
                - kron(&id, &cdc) * Complex64::new(0.5, 0.0)
                - kron(&cdc.transpose(), &id) * Complex64::new(0.5, 0.0);
            l += d * Complex64::new(TAU * ch.rate_hz, 0.0);
        }
        Ok(Self {
            matrix: l,
            dim: n,
            meta: None,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim * dim, dim * dim),
            dim,
            meta: None,
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Hilbert-space dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn meta(&self) -> Option<&LiouvillianMeta> {
        self.meta.as_ref()
    }

    pub fn apply(&self, rho: &DensityMatrix) -> DMatrix<Complex64> {
        let v = &self.matrix * rho.to_vector();
        DMatrix::from_column_slice(self.dim, self.dim, v.as_slice())
    }

    /// ‖vec(I)† L‖₂, zero for a trace-preserving generator.
    pub fn trace_residual(&self) -> f64 {
        let n = self.dim;
        let mut id = DVector::<Complex64>::zeros(n * n);
        for k in 0..n {
            id[k * (n + 1)] = Complex64::new(1.0, 0.0);
        }
        (id.adjoint() * &self.matrix).norm()
    }

    /// ‖L vec(ρ)‖₂ / ‖L‖_F; scale free so that MHz and GHz models compare.
    pub fn relative_residual(&self, rho: &DensityMatrix) -> f64 {
        let norm = self.matrix.norm();
        if norm == 0.0 {
            return 0.0;
        }
        (&self.matrix * rho.to_vector()).norm() / norm
    }

    /// Largest frequency scale in the generator, Hz.
    pub fn max_rate_hz(&self) -> f64 {
        self.matrix.camax() / TAU
    }

    /// Default RK4 step: 10⁻² divided by the largest rate, Rabi frequency or
    /// detuning. `None` for the zero generator.
    pub fn default_step(&self) -> Option<f64> {
        let r = self.max_rate_hz();
        (r > 0.0).then(|| 1e-2 / r)
    }
}

/// Lindblad generator for a rotating-frame Hamiltonian and dissipator set.
pub fn build_liouvillian(frame: &RotatingFrame, dis: &DissipatorSpec) -> Result<Liouvillian> {
    dis.validate()?;
    let mut l = Liouvillian::from_parts(&frame.hamiltonian, &dis.channels())?;
    l.meta = Some(LiouvillianMeta {
        pump: frame.pump,
        probe: frame.probe,
        dissipators: *dis,
    });
    Ok(l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::frame::assemble_rotating_frame;
    use crate::spin::SpinSystemConfig;
    use nalgebra::SymmetricEigen;

    fn frame(pump_rabi: f64, probe_rabi: f64) -> RotatingFrame {
        assemble_rotating_frame(
            &SpinSystemConfig::default(),
            &DriveSpec::new(Branch::Up, pump_rabi, 3e6),
            &DriveSpec::new(Branch::Down, probe_rabi, -40e6),
        )
        .unwrap()
    }

    #[test]
    fn trace_preserving() {
        let l = build_liouvillian(&frame(50e6, 20e6), &DissipatorSpec::reference()).unwrap();
        assert!(l.trace_residual() < 1e-9 * l.matrix().camax().max(1.0), "{}", l.trace_residual());
        let mixed = DissipatorSpec {
            w_nuc_flip_hz: 3.0,
            branching_up: 0.3,
            w_flipflop_up_hz: 7.0,
            ..DissipatorSpec::reference()
        };
        let l = build_liouvillian(&frame(50e6, 20e6), &mixed).unwrap();
        assert!(l.trace_residual() < 1e-9 * l.matrix().camax());
    }

    #[test]
    fn negative_rates_rejected() {
        let bad = DissipatorSpec {
            gamma_e_relax_hz: -1.0,
            ..DissipatorSpec::reference()
        };
        assert!(build_liouvillian(&frame(1e6, 1e6), &bad).is_err());
        let bad = DissipatorSpec {
            branching_up: 1.5,
            ..DissipatorSpec::reference()
        };
        assert!(build_liouvillian(&frame(1e6, 1e6), &bad).is_err());
    }

    #[test]
    fn closed_system_spectrum_is_energy_differences() {
        let f = frame(50e6, 20e6);
        let l = build_liouvillian(&f, &DissipatorSpec::none()).unwrap();
        // L is anti-Hermitian here, so i·L is Hermitian with eigenvalues 2π(E_j − E_k)
        let il = l.matrix() * Complex64::new(0.0, 1.0);
        assert!((&il - il.adjoint()).camax() < 1e-6);
        let mut got: Vec<f64> = SymmetricEigen::new(il).eigenvalues.iter().copied().collect();
        got.sort_by(|a, b| a.total_cmp(b));
        let e = SymmetricEigen::new(f.hamiltonian.clone()).eigenvalues;
        let mut want: Vec<f64> = Vec::new();
        for j in 0..6 {
            for k in 0..6 {
                want.push(TAU * (e[j] - e[k]));
            }
        }
        want.sort_by(|a, b| a.total_cmp(b));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-6 * TAU * 1e8, "{g} vs {w}");
        }
    }

    #[test]
    fn mirrored_channels_map_onto_each_other() {
        let dis = DissipatorSpec {
            branching_up: 0.2,
            w_flipflop_down_hz: 3.0,
            w_flipflop_up_hz: 0.5,
            ..DissipatorSpec::reference()
        };
        let a = dis.channels();
        let b = dis.mirrored().channels();
        for ch in &a {
            let (to, from) = nonzero(&ch.operator);
            let image = b.iter().find(|c| {
                let (t, f) = nonzero(&c.operator);
                t == Level::ALL[to].mirrored().index() && f == Level::ALL[from].mirrored().index()
            });
            let rate = image.expect("mirrored channel exists").rate_hz;
            assert!((rate - ch.rate_hz).abs() <= 1e-12 * ch.rate_hz);
        }
    }

    fn nonzero(m: &DMatrix<Complex64>) -> (usize, usize) {
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)].norm() > 0.0 {
                    return (i, j);
                }
            }
        }
        unreachable!()
    }
}
