//! Level structure of a donor electron (spin 1/2) coupled to a spin-1/2
//! nucleus, and of the bound-exciton manifold it is optically connected to.
//!
//! Basis ordering is fixed throughout the crate:
//!
//! ```text
//! 0 |↑e ↑n⟩   1 |↑e ↓n⟩   2 |↓e ↑n⟩   3 |↓e ↓n⟩   4 |X ↑n⟩   5 |X ↓n⟩
//! ```
//!
//! All energies are frequencies in Hz. The hyperfine term is `A S·I`, so a
//! nucleus with a negative gyromagnetic ratio (¹¹⁹Sn) carries `A < 0`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::{PhysicalConstants, CODATA_2018, G_ELECTRON_ZNO_DONOR, G_NUCLEAR_SN119};
use crate::error::{ensure_finite, Error, Result};

/// Electron spin label of a ground-state branch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Up,
    Down,
}

impl Branch {
    pub fn opposite(self) -> Self {
        match self {
            Branch::Up => Branch::Down,
            Branch::Down => Branch::Up,
        }
    }

    /// S_z eigenvalue.
    pub fn sz(self) -> f64 {
        match self {
            Branch::Up => 0.5,
            Branch::Down => -0.5,
        }
    }
}

/// Nuclear spin label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NuclearSpin {
    Up,
    Down,
}

impl NuclearSpin {
    pub const BOTH: [NuclearSpin; 2] = [NuclearSpin::Up, NuclearSpin::Down];

    pub fn flipped(self) -> Self {
        match self {
            NuclearSpin::Up => NuclearSpin::Down,
            NuclearSpin::Down => NuclearSpin::Up,
        }
    }

    /// I_z eigenvalue.
    pub fn iz(self) -> f64 {
        match self {
            NuclearSpin::Up => 0.5,
            NuclearSpin::Down => -0.5,
        }
    }
}

/// One of the six levels of the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Level {
    UpEUpN,
    UpEDownN,
    DownEUpN,
    DownEDownN,
    ExcitedUpN,
    ExcitedDownN,
}

impl Level {
    pub const ALL: [Level; 6] = [
        Level::UpEUpN,
        Level::UpEDownN,
        Level::DownEUpN,
        Level::DownEDownN,
        Level::ExcitedUpN,
        Level::ExcitedDownN,
    ];

    pub fn ground(branch: Branch, nucleus: NuclearSpin) -> Self {
        match (branch, nucleus) {
            (Branch::Up, NuclearSpin::Up) => Level::UpEUpN,
            (Branch::Up, NuclearSpin::Down) => Level::UpEDownN,
            (Branch::Down, NuclearSpin::Up) => Level::DownEUpN,
            (Branch::Down, NuclearSpin::Down) => Level::DownEDownN,
        }
    }

    pub fn excited(nucleus: NuclearSpin) -> Self {
        match nucleus {
            NuclearSpin::Up => Level::ExcitedUpN,
            NuclearSpin::Down => Level::ExcitedDownN,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn nucleus(self) -> NuclearSpin {
        match self {
            Level::UpEUpN | Level::DownEUpN | Level::ExcitedUpN => NuclearSpin::Up,
            _ => NuclearSpin::Down,
        }
    }

    /// Electron branch for ground levels, `None` for the exciton.
    pub fn branch(self) -> Option<Branch> {
        match self {
            Level::UpEUpN | Level::UpEDownN => Some(Branch::Up),
            Level::DownEUpN | Level::DownEDownN => Some(Branch::Down),
            _ => None,
        }
    }

    /// Image under the exchange ↑e↔↓e, ↑n↔↓n (exciton keeps its role).
    pub fn mirrored(self) -> Self {
        match self {
            Level::UpEUpN => Level::DownEDownN,
            Level::UpEDownN => Level::DownEUpN,
            Level::DownEUpN => Level::UpEDownN,
            Level::DownEDownN => Level::UpEUpN,
            Level::ExcitedUpN => Level::ExcitedDownN,
            Level::ExcitedDownN => Level::ExcitedUpN,
        }
    }
}

/// Physical parameters of the donor system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpinSystemConfig {
    /// Ground donor electron g-factor.
    pub g_electron: f64,
    /// Nuclear g-factor (signed).
    pub g_nuclear: f64,
    /// Hyperfine constant A in `A S·I`, Hz (signed).
    pub hyperfine_hz: f64,
    /// Effective Zeeman g-factor of the bound-exciton hole.
    pub g_excited: f64,
    /// Magnetic field, T.
    pub field_tesla: f64,
    /// Optional hyperfine-like splitting of the excited manifold, Hz.
    pub excited_splitting_offset_hz: f64,
    /// Drop the electron–nuclear flip-flop part of `A S·I`.
    pub secular_only: bool,
}

impl Default for SpinSystemConfig {
    fn default() -> Self {
        Self {
            g_electron: G_ELECTRON_ZNO_DONOR,
            g_nuclear: G_NUCLEAR_SN119,
            hyperfine_hz: -392.0e6,
            g_excited: 0.0,
            field_tesla: 6.0,
            excited_splitting_offset_hz: 0.0,
            secular_only: false,
        }
    }
}

impl SpinSystemConfig {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("g_electron", self.g_electron)?;
        ensure_finite("g_nuclear", self.g_nuclear)?;
        ensure_finite("hyperfine_hz", self.hyperfine_hz)?;
        ensure_finite("g_excited", self.g_excited)?;
        ensure_finite("field_tesla", self.field_tesla)?;
        ensure_finite("excited_splitting_offset_hz", self.excited_splitting_offset_hz)?;
        if self.field_tesla < 0.0 {
            return Err(Error::invalid("field_tesla", "must be >= 0"));
        }
        if self.g_electron <= 0.0 {
            return Err(Error::invalid("g_electron", "must be > 0"));
        }
        Ok(())
    }

    /// Electron Zeeman splitting g_e μ_B B / h, Hz.
    pub fn electron_zeeman_hz(&self) -> f64 {
        self.g_electron * CODATA_2018.mu_b_over_h() * self.field_tesla
    }

    /// Coefficient of I_z in the nuclear Zeeman term, −g_n μ_N B / h, Hz.
    pub fn nuclear_zeeman_hz(&self) -> f64 {
        -self.g_nuclear * CODATA_2018.mu_n_over_h() * self.field_tesla
    }

    /// Diagonal (secular) ground energy of a basis level, Hz.
    pub fn secular_ground_energy(&self, branch: Branch, nucleus: NuclearSpin) -> f64 {
        let (sz, iz) = (branch.sz(), nucleus.iz());
        self.electron_zeeman_hz() * sz + self.nuclear_zeeman_hz() * iz + self.hyperfine_hz * sz * iz
    }

    /// Excited-manifold energy, Hz. The hole Zeeman shift is common to both
    /// nuclear states.
    pub fn excited_energy(&self, nucleus: NuclearSpin) -> f64 {
        0.5 * self.g_excited * CODATA_2018.mu_b_over_h() * self.field_tesla
            + (self.nuclear_zeeman_hz() + self.excited_splitting_offset_hz) * nucleus.iz()
    }
}

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Ground-manifold Hamiltonian in the basis |↑e↑n⟩,|↑e↓n⟩,|↓e↑n⟩,|↓e↓n⟩, Hz.
pub fn ground_hamiltonian(cfg: &SpinSystemConfig) -> DMatrix<Complex64> {
    let mut h = DMatrix::zeros(4, 4);
    for (i, level) in Level::ALL[..4].iter().enumerate() {
        let branch = level.branch().expect("ground level");
        h[(i, i)] = c(cfg.secular_ground_energy(branch, level.nucleus()));
    }
    if !cfg.secular_only {
        // (A/2)(S+I− + S−I+) couples |↑e↓n⟩ and |↓e↑n⟩
        let flip = c(0.5 * cfg.hyperfine_hz);
        h[(1, 2)] = flip;
        h[(2, 1)] = flip;
    }
    h
}

/// Excited-manifold Hamiltonian in the basis |X↑n⟩,|X↓n⟩, Hz.
pub fn excited_hamiltonian(cfg: &SpinSystemConfig) -> DMatrix<Complex64> {
    DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
        c(cfg.excited_energy(NuclearSpin::Up)),
        c(cfg.excited_energy(NuclearSpin::Down)),
    ]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelEnergy {
    pub level: Level,
    pub energy_hz: f64,
}

/// Nuclear-spin-conserving optical transition |b, m⟩ → |X, m⟩.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OpticalTransition {
    pub branch: Branch,
    pub nucleus: NuclearSpin,
    /// Offset from the zero-field optical line, Hz.
    pub frequency_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelDiagram {
    pub ground_levels: [LevelEnergy; 4],
    pub excited_levels: [LevelEnergy; 2],
    pub transitions: Vec<OpticalTransition>,
}

impl LevelDiagram {
    pub fn energy(&self, level: Level) -> f64 {
        self.ground_levels
            .iter()
            .chain(self.excited_levels.iter())
            .find(|l| l.level == level)
            .map(|l| l.energy_hz)
            .expect("every level is present")
    }

    pub fn transition(&self, branch: Branch, nucleus: NuclearSpin) -> f64 {
        self.transitions
            .iter()
            .find(|t| t.branch == branch && t.nucleus == nucleus)
            .map(|t| t.frequency_hz)
            .expect("every transition is present")
    }

    /// Transition frequency of a branch averaged over the nuclear label.
    pub fn branch_mean(&self, branch: Branch) -> f64 {
        0.5 * (self.transition(branch, NuclearSpin::Up) + self.transition(branch, NuclearSpin::Down))
    }

    /// Deviation of one transition from its branch mean, Hz.
    pub fn transition_offset(&self, branch: Branch, nucleus: NuclearSpin) -> f64 {
        self.transition(branch, nucleus) - self.branch_mean(branch)
    }

    /// Two-photon (Raman) splitting ω(↓e,m) − ω(↑e,m) within one nuclear sector.
    pub fn raman_splitting(&self, nucleus: NuclearSpin) -> f64 {
        self.transition(Branch::Down, nucleus) - self.transition(Branch::Up, nucleus)
    }

    /// Spacing between the two two-photon resonances; |A| in the secular limit.
    pub fn doublet_spacing(&self) -> f64 {
        (self.raman_splitting(NuclearSpin::Up) - self.raman_splitting(NuclearSpin::Down)).abs()
    }

    /// Distinct transition frequencies (merged within `tol_hz`).
    pub fn distinct_frequencies(&self, tol_hz: f64) -> Vec<f64> {
        let mut f: Vec<f64> = self.transitions.iter().map(|t| t.frequency_hz).collect();
        f.sort_by(|a, b| a.total_cmp(b));
        f.dedup_by(|a, b| (*a - *b).abs() <= tol_hz);
        f
    }
}

/// Ground energies; with the full `S·I` coupling the |↑e↓n⟩/|↓e↑n⟩ block is
/// diagonalized and each eigenvalue keeps the label of its dominant component.
fn ground_energies(cfg: &SpinSystemConfig) -> [f64; 4] {
    let e = |b, n| cfg.secular_ground_energy(b, n);
    let mut out = [
        e(Branch::Up, NuclearSpin::Up),
        e(Branch::Up, NuclearSpin::Down),
        e(Branch::Down, NuclearSpin::Up),
        e(Branch::Down, NuclearSpin::Down),
    ];
    if !cfg.secular_only {
        let (a, d) = (out[1], out[2]);
        let mean = 0.5 * (a + d);
        let half_gap = (0.25 * (a - d).powi(2) + 0.25 * cfg.hyperfine_hz.powi(2)).sqrt();
        if a >= d {
            out[1] = mean + half_gap;
            out[2] = mean - half_gap;
        } else {
            out[1] = mean - half_gap;
            out[2] = mean + half_gap;
        }
    }
    out
}

/// Level energies and the four nuclear-spin-conserving optical transitions.
pub fn optical_transitions(cfg: &SpinSystemConfig) -> LevelDiagram {
    if !is_secular_regime(cfg) {
        log::warn!(
            "|A| = {:.3e} Hz is not small against the electron Zeeman splitting {:.3e} Hz",
            cfg.hyperfine_hz.abs(),
            cfg.electron_zeeman_hz()
        );
    }
    let energies = ground_energies(cfg);
    let ground_levels = std::array::from_fn(|i| LevelEnergy {
        level: Level::ALL[i],
        energy_hz: energies[i],
    });
    let excited_levels = std::array::from_fn(|i| {
        let level = Level::ALL[4 + i];
        LevelEnergy {
            level,
            energy_hz: cfg.excited_energy(level.nucleus()),
        }
    });
    let mut transitions = Vec::with_capacity(4);
    for branch in [Branch::Up, Branch::Down] {
        for nucleus in NuclearSpin::BOTH {
            let g = Level::ground(branch, nucleus).index();
            transitions.push(OpticalTransition {
                branch,
                nucleus,
                frequency_hz: cfg.excited_energy(nucleus) - energies[g],
            });
        }
    }
    LevelDiagram {
        ground_levels,
        excited_levels,
        transitions,
    }
}

/// True when |A| is at most 1% of the electron Zeeman splitting.
pub fn is_secular_regime(cfg: &SpinSystemConfig) -> bool {
    cfg.hyperfine_hz.abs() <= 1e-2 * cfg.electron_zeeman_hz()
}

/// Thermal nuclear polarization for a spin 1/2 with g-factor `g_nuclear` in
/// field `field_tesla` (signed) at temperature `temperature_k`.
pub fn thermal_nuclear_polarization(
    g_nuclear: f64,
    field_tesla: f64,
    temperature_k: f64,
    constants: &PhysicalConstants,
) -> Result<f64> {
    ensure_finite("temperature_k", temperature_k)?;
    if temperature_k <= 0.0 {
        return Err(Error::invalid("temperature_k", "must be > 0"));
    }
    // −g_n μ_N B I_z: the lower nuclear level is ↑n when g_n B > 0
    let x = g_nuclear * constants.mu_n * field_tesla / (2.0 * constants.k_b * temperature_k);
    Ok(x.tanh())
}

/// Equilibrium nuclear polarization (P↑n − P↓n)/(P↑n + P↓n) at temperature `temperature_k`.
pub fn equilibrium_nuclear_polarization(cfg: &SpinSystemConfig, temperature_k: f64) -> Result<f64> {
    cfg.validate()?;
    thermal_nuclear_polarization(cfg.g_nuclear, cfg.field_tesla, temperature_k, &CODATA_2018)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::SymmetricEigen;

    fn eigenvalues_sorted(h: &DMatrix<Complex64>) -> Vec<f64> {
        let mut v: Vec<f64> = SymmetricEigen::new(h.clone()).eigenvalues.iter().copied().collect();
        v.sort_by(|a, b| a.total_cmp(b));
        v
    }

    fn hermiticity(h: &DMatrix<Complex64>) -> f64 {
        (h - h.adjoint()).norm()
    }

    #[test]
    fn zero_field_zero_coupling_is_zero() {
        let cfg = SpinSystemConfig {
            hyperfine_hz: 0.0,
            field_tesla: 0.0,
            ..Default::default()
        };
        assert_eq!(ground_hamiltonian(&cfg).norm(), 0.0);
        assert_eq!(excited_hamiltonian(&cfg).norm(), 0.0);
    }

    #[test]
    fn zero_field_hyperfine_spectrum() {
        let cfg = SpinSystemConfig {
            field_tesla: 0.0,
            ..Default::default()
        };
        let h = ground_hamiltonian(&cfg);
        assert_eq!(hermiticity(&h), 0.0);
        let ev = eigenvalues_sorted(&h);
        // {−3A/4, A/4 ×3} with A = −392 MHz
        for e in &ev[..3] {
            assert_relative_eq!(*e, -98.0e6, max_relative = 1e-12);
        }
        assert_relative_eq!(ev[3], 294.0e6, max_relative = 1e-12);
    }

    #[test]
    fn electron_zeeman_at_six_tesla() {
        let cfg = SpinSystemConfig {
            hyperfine_hz: 0.0,
            ..Default::default()
        };
        let d = optical_transitions(&cfg);
        let split = d.energy(Level::UpEUpN) - d.energy(Level::DownEUpN);
        assert!((split / 1e9 - 165.4).abs() < 0.05, "{split}");
    }

    #[test]
    fn excited_nuclear_zeeman() {
        let h = excited_hamiltonian(&SpinSystemConfig::default());
        let split = (h[(0, 0)] - h[(1, 1)]).re.abs();
        assert!((split / 1e6 - 95.8).abs() < 0.05, "{split}");
        assert_eq!(h[(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn trace_is_zero() {
        let h = ground_hamiltonian(&SpinSystemConfig::default());
        assert!(h.trace().norm() < 1e-6);
    }

    #[test]
    fn doublet_spacing_is_hyperfine() {
        let cfg = SpinSystemConfig {
            secular_only: true,
            ..Default::default()
        };
        let d = optical_transitions(&cfg);
        assert_eq!(d.transitions.len(), 4);
        assert_relative_eq!(d.doublet_spacing(), 392.0e6, max_relative = 1e-9);
    }

    #[test]
    fn no_hyperfine_collapses_transitions() {
        let cfg = SpinSystemConfig {
            hyperfine_hz: 0.0,
            ..Default::default()
        };
        assert_eq!(optical_transitions(&cfg).distinct_frequencies(1e-3).len(), 2);
    }

    #[test]
    fn full_coupling_matches_eigensolver() {
        // analytic 2×2 block vs a dense eigensolve of the 4×4 Hamiltonian
        for a in [-392e6, 250e6, -1e9] {
            let cfg = SpinSystemConfig {
                hyperfine_hz: a,
                ..Default::default()
            };
            let mut analytic: Vec<f64> = optical_transitions(&cfg)
                .ground_levels
                .iter()
                .map(|l| l.energy_hz)
                .collect();
            analytic.sort_by(|a, b| a.total_cmp(b));
            let dense = eigenvalues_sorted(&ground_hamiltonian(&cfg));
            for (x, y) in analytic.iter().zip(&dense) {
                assert!((x - y).abs() < 1e-3, "{x} vs {y}");
            }
        }
    }

    #[test]
    fn hyperfine_sign_swaps_nuclear_labels() {
        let base = SpinSystemConfig {
            secular_only: true,
            ..Default::default()
        };
        let flipped = SpinSystemConfig {
            hyperfine_hz: -base.hyperfine_hz,
            ..base.clone()
        };
        let lower = |cfg: &SpinSystemConfig| {
            let d = optical_transitions(cfg);
            let (up, down) = (d.raman_splitting(NuclearSpin::Up), d.raman_splitting(NuclearSpin::Down));
            (if up < down { NuclearSpin::Up } else { NuclearSpin::Down }, d.doublet_spacing())
        };
        let (l1, s1) = lower(&base);
        let (l2, s2) = lower(&flipped);
        assert_eq!(l1, NuclearSpin::Up);
        assert_eq!(l2, NuclearSpin::Down);
        assert_relative_eq!(s1, s2, max_relative = 1e-12);
    }

    #[test]
    fn equilibrium_polarization_sn119() {
        let p = equilibrium_nuclear_polarization(&SpinSystemConfig::default(), 8.0).unwrap();
        assert!(p < 0.0);
        assert!((p.abs() / 2.9e-4 - 1.0).abs() < 0.05, "{p}");
        let zero = SpinSystemConfig {
            field_tesla: 0.0,
            ..Default::default()
        };
        assert_eq!(equilibrium_nuclear_polarization(&zero, 8.0).unwrap(), 0.0);
        assert!(equilibrium_nuclear_polarization(&zero, 0.0).is_err());
        assert!(equilibrium_nuclear_polarization(&zero, -1.0).is_err());
    }

    #[test]
    fn rejects_invalid_config() {
        let bad = SpinSystemConfig {
            field_tesla: -1.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = SpinSystemConfig {
            g_electron: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
