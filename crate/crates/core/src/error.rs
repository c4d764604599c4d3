use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{field}`: {reason}")]
    InvalidParameter { field: &'static str, reason: String },

    #[error("pump and probe both address the {0:?} branch; the rotating frame would be time-dependent")]
    SameBranch(crate::spin::Branch),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("steady state is not unique: {0}")]
    NonUniqueSteadyState(String),

    #[error("steady state violates positivity (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("integration became unstable at t = {time:e} s ({reason}); retry with step <= {suggested_step:e} s")]
    StepInstability {
        time: f64,
        reason: String,
        suggested_step: f64,
    },

    #[error("expected exactly two dips, found {0}")]
    DipCount(usize),

    #[error("missing chemical potential for species `{species}` (condition `{condition}`)")]
    MissingChemicalPotential { species: String, condition: String },

    #[error("charge states must differ (both q = {0})")]
    EqualCharges(i32),

    #[error("fit needs at least two distinct eligible points (N >= {n_min}), got {eligible}")]
    InsufficientFitPoints { n_min: u32, eligible: usize },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field,
            reason: reason.into(),
        }
    }

    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonUniqueSteadyState(_)
                | Error::NotPositive(_)
                | Error::StepInstability { .. }
                | Error::DipCount(_)
                | Error::InsufficientFitPoints { .. }
        )
    }
}

pub(crate) fn ensure_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite, got {value}")))
    }
}

pub(crate) fn ensure_non_negative(field: &'static str, value: f64) -> Result<()> {
    ensure_finite(field, value)?;
    if value < 0.0 {
        return Err(Error::invalid(field, format!("must be >= 0, got {value}")));
    }
    Ok(())
}
