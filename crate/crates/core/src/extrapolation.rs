//! Dilute-limit extrapolation of supercell hyperfine parameters, the contact
//! hyperfine formula and orthorhombic supercell geometry.

use serde::{Deserialize, Serialize};

use crate::constants::PhysicalConstants;
use crate::error::{ensure_finite, Error, Result};

/// Isotropic hyperfine parameter computed in an `atoms`-atom supercell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperfinePoint {
    pub atoms: u32,
    pub a_mhz: f64,
    /// Functional label, e.g. `semilocal` or `hybrid`.
    pub method: String,
}

impl HyperfinePoint {
    pub fn new(atoms: u32, a_mhz: f64, method: impl Into<String>) -> Self {
        Self {
            atoms,
            a_mhz,
            method: method.into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.atoms < 16 {
            return Err(Error::invalid("atoms", format!("must be >= 16, got {}", self.atoms)));
        }
        ensure_finite("a_mhz", self.a_mhz)
    }

    /// Fit abscissa 1000/N.
    pub fn inverse_size(&self) -> f64 {
        1000.0 / f64::from(self.atoms)
    }
}

/// A(N) = intercept + slope · 1000/N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiluteFit {
    pub intercept_mhz: f64,
    pub slope_mhz: f64,
    pub n_min: u32,
    pub points_used: usize,
    /// ‖residuals‖₂, MHz.
    pub residual_norm_mhz: f64,
}

impl DiluteFit {
    pub fn at(&self, atoms: u32) -> f64 {
        self.intercept_mhz + self.slope_mhz * 1000.0 / f64::from(atoms)
    }
}

/// A = (2μ0/3) g_e μ_B g_I μ_N σ(R) / h, with σ(R) in a₀⁻³. Returns MHz.
pub fn contact_hyperfine(g_nuclear: f64, spin_density_a0: f64, constants: &PhysicalConstants) -> f64 {
    contact_hyperfine_with_ge(g_nuclear, spin_density_a0, constants.g_e_free, constants)
}

/// Contact hyperfine with an explicit electron g-factor.
pub fn contact_hyperfine_with_ge(
    g_nuclear: f64,
    spin_density_a0: f64,
    g_electron: f64,
    constants: &PhysicalConstants,
) -> f64 {
    let sigma_si = spin_density_a0 / constants.a0.powi(3);
    2.0 * constants.mu0 / 3.0 * g_electron * constants.mu_b * g_nuclear * constants.mu_n * sigma_si / constants.h / 1e6
}

/// Ordinary least squares of A against 1000/N over points with N ≥ `n_min`.
pub fn fit_dilute(points: &[HyperfinePoint], n_min: u32) -> Result<DiluteFit> {
    for p in points {
        p.validate()?;
    }
    let used: Vec<&HyperfinePoint> = points.iter().filter(|p| p.atoms >= n_min).collect();
    let distinct = {
        let mut n: Vec<u32> = used.iter().map(|p| p.atoms).collect();
        n.sort_unstable();
        n.dedup();
        n.len()
    };
    if distinct < 2 {
        return Err(Error::InsufficientFitPoints {
            n_min,
            eligible: used.len(),
        });
    }
    let m = used.len() as f64;
    let x_mean = used.iter().map(|p| p.inverse_size()).sum::<f64>() / m;
    let y_mean = used.iter().map(|p| p.a_mhz).sum::<f64>() / m;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for p in &used {
        let dx = p.inverse_size() - x_mean;
        sxy += dx * (p.a_mhz - y_mean);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let residual = used
        .iter()
        .map(|p| (p.a_mhz - intercept - slope * p.inverse_size()).powi(2))
        .sum::<f64>()
        .sqrt();
    Ok(DiluteFit {
        intercept_mhz: intercept,
        slope_mhz: slope,
        n_min,
        points_used: used.len(),
        residual_norm_mhz: residual,
    })
}

/// Intercept of the fitted line after shifting it through `anchor`.
pub fn rigid_shift_extrapolate(fit: &DiluteFit, anchor: &HyperfinePoint) -> Result<f64> {
    if anchor.atoms == 0 {
        return Err(Error::invalid("anchor.atoms", "must be > 0"));
    }
    ensure_finite("anchor.a_mhz", anchor.a_mhz)?;
    Ok(anchor.a_mhz - fit.slope_mhz * anchor.inverse_size())
}

/// n×n×n supercell of the 16-atom orthorhombic cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupercellGeometry {
    pub n: u32,
    pub atom_count: u64,
    /// Orthorhombic cell parameters a′, b′, c′ of the 16-atom cell, Å.
    pub a_prime: f64,
    pub b_prime: f64,
    pub c_prime: f64,
}

impl SupercellGeometry {
    /// Volume of the n×n×n supercell, Å³.
    pub fn volume(&self) -> f64 {
        f64::from(self.n).powi(3) * self.a_prime * self.b_prime * self.c_prime
    }
}

/// Transformation from the hexagonal (a, b, c) vectors to the orthorhombic cell.
pub const ORTHORHOMBIC_TRANSFORM: [[f64; 3]; 3] = [[2.0, 0.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, 1.0]];

/// Atoms in the hexagonal wurtzite cell.
const HEX_CELL_ATOMS: u64 = 4;

pub fn supercell_geometry(n: u32, a_hex: f64, c_hex: f64) -> Result<SupercellGeometry> {
    if n == 0 {
        return Err(Error::invalid("n", "must be >= 1"));
    }
    for (field, v) in [("a_hex", a_hex), ("c_hex", c_hex)] {
        ensure_finite(field, v)?;
        if v <= 0.0 {
            return Err(Error::invalid(field, "must be > 0"));
        }
    }
    let (s, c) = (3f64.sqrt() / 2.0, 0.5);
    let hex = [[a_hex, 0.0, 0.0], [-c * a_hex, s * a_hex, 0.0], [0.0, 0.0, c_hex]];
    let t = ORTHORHOMBIC_TRANSFORM;
    let vec = |row: [f64; 3]| -> [f64; 3] {
        std::array::from_fn(|k| (0..3).map(|j| row[j] * hex[j][k]).sum())
    };
    let norm = |v: [f64; 3]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let det = t[0][0] * (t[1][1] * t[2][2] - t[1][2] * t[2][1]) - t[0][1] * (t[1][0] * t[2][2] - t[1][2] * t[2][0])
        + t[0][2] * (t[1][0] * t[2][1] - t[1][1] * t[2][0]);
    let cell_atoms = HEX_CELL_ATOMS * det.round() as u64;
    Ok(SupercellGeometry {
        n,
        atom_count: cell_atoms * u64::from(n).pow(3),
        a_prime: norm(vec(t[0])),
        b_prime: norm(vec(t[1])),
        c_prime: norm(vec(t[2])),
    })
}

/// Published isotropic hyperfine parameters (MHz) for shallow donors in ZnO.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReferenceHyperfine {
    pub donor: &'static str,
    pub isotope: &'static str,
    pub theory_mhz: f64,
    pub experiment_mhz: f64,
}

/// Reference values for display and regression, not computed here.
pub const REFERENCE_HYPERFINE: [ReferenceHyperfine; 3] = [
    ReferenceHyperfine {
        donor: "Ga",
        isotope: "69Ga",
        theory_mhz: 7.2,
        experiment_mhz: 18.8,
    },
    ReferenceHyperfine {
        donor: "In",
        isotope: "115In",
        theory_mhz: 103.0,
        experiment_mhz: 102.5,
    },
    ReferenceHyperfine {
        donor: "Sn-Li",
        isotope: "119Sn",
        theory_mhz: 466.7,
        experiment_mhz: 388.0,
    },
];
