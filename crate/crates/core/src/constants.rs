//! Physical constants (CODATA 2018 exact or recommended values, SI units).

/// Fixed set of SI constants used by the spin model and the contact
/// hyperfine formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Vacuum magnetic permeability, N/A².
    pub mu0: f64,
    /// Free-electron g-factor (magnitude).
    pub g_e_free: f64,
    /// Bohr magneton, J/T.
    pub mu_b: f64,
    /// Nuclear magneton, J/T.
    pub mu_n: f64,
    /// Planck constant, J·s.
    pub h: f64,
    /// Boltzmann constant, J/K.
    pub k_b: f64,
    /// Bohr radius, m.
    pub a0: f64,
}

pub const CODATA_2018: PhysicalConstants = PhysicalConstants {
    mu0: 1.256_637_062_12e-6,
    g_e_free: 2.002_319_304_362_56,
    mu_b: 9.274_010_078_3e-24,
    mu_n: 5.050_783_746_1e-27,
    h: 6.626_070_15e-34,
    k_b: 1.380_649e-23,
    a0: 5.291_772_109_03e-11,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CODATA_2018
    }
}

impl PhysicalConstants {
    /// Bohr magneton over h, Hz/T.
    pub fn mu_b_over_h(&self) -> f64 {
        self.mu_b / self.h
    }

    /// Nuclear magneton over h, Hz/T.
    pub fn mu_n_over_h(&self) -> f64 {
        self.mu_n / self.h
    }
}

/// Nuclear g-factor of ¹¹⁹Sn (μ/μ_N = −1.04728, I = 1/2).
pub const G_NUCLEAR_SN119: f64 = -2.094_56;

/// Donor electron g-factor commonly used for shallow donors in ZnO.
pub const G_ELECTRON_ZNO_DONOR: f64 = 1.97;

/// Energy of the excited bound-exciton line above the main Sn–Li line, eV.
pub const EXCITED_EXCITON_OFFSET_EV: f64 = 4.2e-3;
