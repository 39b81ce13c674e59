use thiserror::Error;

/// Errors raised by the numerical routines of the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("non-finite integrand sample {value} at node ({x}, {y})")]
    NonFiniteSample { x: f64, y: f64, value: f64 },

    #[error("non-finite value {value} at grid index ({ix}, {iy})")]
    NonFiniteField { ix: usize, iy: usize, value: f64 },

    #[error("assembled matrix is not Hermitian: max asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    Asymmetric { asymmetry: f64, tolerance: f64 },

    #[error("eigenvalue {value:e} is below the clamping tolerance {tolerance:e}")]
    NegativeEigenvalue { value: f64, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("harmonic polynomial degree {degree} exceeds the basis cut {cut}")]
    DegreeTooHigh { degree: usize, cut: usize },

    #[error("empty {0}")]
    Empty(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be finite and > 0",
        })
    }
}

pub(crate) fn nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be finite and >= 0",
        })
    }
}

pub(crate) fn exponent(name: &'static str, p: f64) -> Result<f64> {
    if p >= 1.0 && !p.is_nan() {
        Ok(p)
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: "must be >= 1 (or infinite)",
        })
    }
}
