//! Physical wave guides ↔ dimensionless delta-well model.
//!
//! A guide of width `a` whose index is raised by `Δñ = Δn + iΔn'` above the
//! background `n₀` acts, to first order in `Δñ`, like a delta well of strength
//! `2 n₀ Δñ k₀² a` in the paraxial equation for the transverse field. With
//! `ℓ = (2 n₀ Δn k₀²)^{-1/2}` and `L = ℓ²/a` the coordinate `x̃ = x/L` puts
//! the well into the form `(1 + iγ) δ(x̃)` with `γ = Δn'/Δn`, and the model
//! eigenvalue relates to the propagation constant by `k² = L²(β² - n₀² k₀²)`.
//!
//! Lengths are in micrometres throughout.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ComplexK;

/// Contrast ratio `|Δñ|/n₀` above which the first-order expansion is suspect.
pub const WEAK_CONTRAST_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveguideSpec {
    /// Background refractive index.
    pub n0: f64,
    /// Real index contrast of the outer guides.
    pub delta_n: f64,
    /// Imaginary index contrast (gain/loss) of the outer guides.
    pub delta_n_prime: f64,
    /// Vacuum wavelength, μm.
    pub lambda0: f64,
    /// Guide width, μm.
    pub a: f64,
    /// Real index contrast of the middle guide, if it differs from `delta_n`.
    pub delta_n_mid: Option<f64>,
}

impl WaveguideSpec {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n0", self.n0),
            ("delta_n", self.delta_n),
            ("lambda0", self.lambda0),
            ("a", self.a),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be > 0, got {v}"
                )));
            }
        }
        if !self.delta_n_prime.is_finite() {
            return Err(Error::InvalidParameter(
                "delta_n_prime must be finite".into(),
            ));
        }
        if let Some(mid) = self.delta_n_mid {
            if !(mid.is_finite() && mid > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "delta_n_mid must be > 0, got {mid}"
                )));
            }
        }
        Ok(())
    }

    /// `|Δn + iΔn'| / n₀`.
    pub fn contrast_ratio(&self) -> f64 {
        self.delta_n.hypot(self.delta_n_prime) / self.n0
    }

    /// True when the contrast is small enough for the delta-well model.
    pub fn is_weak_contrast(&self) -> bool {
        self.contrast_ratio() < WEAK_CONTRAST_LIMIT
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelScales {
    /// `ℓ = (2 n₀ Δn k₀²)^{-1/2}`, μm.
    pub ell: f64,
    /// `L = ℓ²/a`, μm.
    pub big_l: f64,
    /// `γ = Δn'/Δn`.
    pub gamma: f64,
    /// Vacuum wavenumber `2π/λ₀`, μm⁻¹.
    pub k0: f64,
    /// Middle-well strength `Γ = Δn_mid/Δn` (first-order extension to a
    /// middle guide of different contrast); `None` when no middle contrast was
    /// given.
    pub big_gamma: Option<f64>,
}

pub fn to_model(spec: &WaveguideSpec) -> Result<ModelScales> {
    spec.validate()?;
    let k0 = 2.0 * PI / spec.lambda0;
    let ell = (2.0 * spec.n0 * spec.delta_n * k0 * k0).powf(-0.5);
    Ok(ModelScales {
        ell,
        big_l: ell * ell / spec.a,
        gamma: spec.delta_n_prime / spec.delta_n,
        k0,
        big_gamma: spec.delta_n_mid.map(|mid| mid / spec.delta_n),
    })
}

/// Propagation constant `β = sqrt(k²/L² + n₀²k₀²)` on the principal branch.
pub fn beta_from_k(k: ComplexK, scales: &ModelScales, n0: f64) -> Complex64 {
    beta_from_k_value(k.value(), scales, n0)
}

fn beta_from_k_value(k: Complex64, scales: &ModelScales, n0: f64) -> Complex64 {
    let base = n0 * scales.k0;
    (k * k / (scales.big_l * scales.big_l) + base * base).sqrt()
}

/// Inverse of [`beta_from_k`]: `k = L·sqrt(β² - n₀²k₀²)`, principal branch.
pub fn k_from_beta(beta: Complex64, scales: &ModelScales, n0: f64) -> Complex64 {
    let base = n0 * scales.k0;
    scales.big_l * (beta * beta - base * base).sqrt()
}

/// Physical spacing `L · b` (μm) for a model distance `b`.
pub fn physical_separation(b_model: f64, scales: &ModelScales) -> f64 {
    scales.big_l * b_model
}
