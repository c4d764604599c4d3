use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spin::Level;

/// Number of levels in the donor model.
pub const LEVELS: usize = 6;

/// Hermitian, unit-trace density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    rho: DMatrix<Complex64>,
}

pub(crate) const TRACE_TOL: f64 = 1e-10;
pub(crate) const POSITIVITY_TOL: f64 = 1e-9;

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: DMatrix<Complex64>) -> Result<Self> {
        if !rho.is_square() {
            return Err(Error::Dimension {
                expected: rho.nrows(),
                actual: rho.ncols(),
            });
        }
        let herm = (&rho - rho.adjoint()).camax();
        if herm > 1e-10 {
            return Err(Error::NotHermitian(herm));
        }
        let tr = rho.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::invalid("rho", format!("trace must be 1, got {tr}")));
        }
        let dm = Self { rho };
        let min = dm.min_eigenvalue();
        if min < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min));
        }
        Ok(dm)
    }

    pub(crate) fn from_raw(rho: DMatrix<Complex64>) -> Self {
        Self { rho }
    }

    /// Projector onto a single level of the six-level model.
    pub fn pure(level: Level) -> Self {
        let mut rho = DMatrix::zeros(LEVELS, LEVELS);
        rho[(level.index(), level.index())] = Complex64::new(1.0, 0.0);
        Self { rho }
    }

    /// |ψ⟩⟨ψ| for a normalized state vector.
    pub fn from_state(psi: &DVector<Complex64>) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::invalid("psi", "state vector must be non-zero"));
        }
        let psi = psi / Complex64::new(norm, 0.0);
        Ok(Self {
            rho: &psi * psi.adjoint(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            rho: DMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0),
        }
    }

    /// Diagonal density matrix with the given (normalized) populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        let total: f64 = populations.iter().sum();
        if populations.iter().any(|p| *p < 0.0 || !p.is_finite()) || total <= 0.0 {
            return Err(Error::invalid("populations", "must be non-negative with positive sum"));
        }
        let diag = DVector::from_iterator(
            populations.len(),
            populations.iter().map(|p| Complex64::new(p / total, 0.0)),
        );
        Ok(Self {
            rho: DMatrix::from_diagonal(&diag),
        })
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.rho
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.rho
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    pub fn population(&self, level: Level) -> f64 {
        self.rho[(level.index(), level.index())].re
    }

    pub fn populations(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.rho[(i, i)].re).collect()
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    /// Largest entry of |ρ − ρ†|.
    pub fn hermiticity_error(&self) -> f64 {
        (&self.rho - self.rho.adjoint()).camax()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.total_cmp(b));
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    /// Column-stacked vectorization.
    pub fn to_vector(&self) -> DVector<Complex64> {
        DVector::from_column_slice(self.rho.as_slice())
    }

    pub(crate) fn from_vector(v: &DVector<Complex64>, dim: usize) -> Self {
        Self {
            rho: DMatrix::from_column_slice(dim, dim, v.as_slice()),
        }
    }

    /// Max-entry distance to another state.
    pub fn distance(&self, other: &DensityMatrix) -> f64 {
        (&self.rho - &other.rho).camax()
    }

    /// Image under the relabeling ↑e↔↓e, ↑n↔↓n.
    pub fn mirrored(&self) -> Self {
        assert_eq!(self.dim(), LEVELS);
        let mut out = DMatrix::zeros(LEVELS, LEVELS);
        for a in Level::ALL {
            for b in Level::ALL {
                out[(a.mirrored().index(), b.mirrored().index())] = self.rho[(a.index(), b.index())];
            }
        }
        Self { rho: out }
    }
}
