use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Model parameters `(γ, b, Γ)`.
///
/// `gamma` is the gain/loss strength of the outer wells, `b` the half-spacing
/// of the outer wells and `big_gamma` the strength of the real middle well.
/// The outer wells have unit real strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    gamma: f64,
    b: f64,
    big_gamma: f64,
}

impl SystemParams {
    pub fn new(gamma: f64, b: f64, big_gamma: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "gamma must be finite and >= 0, got {gamma}"
            )));
        }
        if !b.is_finite() || b <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "b must be finite and > 0, got {b}"
            )));
        }
        if !big_gamma.is_finite() || big_gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "big_gamma must be finite and > 0, got {big_gamma}"
            )));
        }
        Ok(Self {
            gamma,
            b,
            big_gamma,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn big_gamma(&self) -> f64 {
        self.big_gamma
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(gamma, self.b, self.big_gamma)
    }

    pub fn with_b(&self, b: f64) -> Result<Self> {
        Self::new(self.gamma, b, self.big_gamma)
    }

    /// Complex strength `κ₀ = 1 + iγ` of the left (lossy) well.
    pub fn kappa0(&self) -> Complex64 {
        Complex64::new(1.0, self.gamma)
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(gamma = {}, b = {}, Gamma = {})",
            self.gamma, self.b, self.big_gamma
        )
    }
}

/// Eigenvalue parameter `k` of a bound state, energy `E = -k²`.
///
/// Only the half plane `Re(k) > 0` is admitted; there the outer exponentials
/// decay and every closed form in [`crate::model`] is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexK(Complex64);

impl ComplexK {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn real(re: f64) -> Result<Self> {
        Self::new(re, 0.0)
    }

    pub fn from_complex(k: Complex64) -> Result<Self> {
        if !(k.re.is_finite() && k.im.is_finite()) || k.re <= 0.0 {
            return Err(Error::NonPositiveK(k));
        }
        Ok(Self(k))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn re(self) -> f64 {
        self.0.re
    }

    pub fn im(self) -> f64 {
        self.0.im
    }

    pub fn conj(self) -> Self {
        Self(self.0.conj())
    }

    /// True when `|Im k| <= tol · |k|`.
    pub fn is_real(self, tol: f64) -> bool {
        self.0.im.abs() <= tol * self.0.norm()
    }
}

impl From<ComplexK> for Complex64 {
    fn from(k: ComplexK) -> Self {
        k.0
    }
}

impl fmt::Display for ComplexK {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}
