use nalgebra::Vector3;
use num_complex::Complex64;

use super::matrix::{build_matrix, frobenius_norm};
use super::secular::{second_root_condition, ExpPolynomial};
use super::wavefunction::PiecewiseWavefunction;
use crate::error::{Error, Result};
use crate::params::{ComplexK, SystemParams};

/// Scaled secular residual below which `k` is accepted as an eigenvalue.
pub const ROOT_TOLERANCE: f64 = 1e-10;

/// Below this γ the second eigenvector is taken from its analytic limit.
pub const GAMMA0_THRESHOLD: f64 = 1e-6;

/// Denominators of the coefficient formulas smaller than this (with γ below
/// [`GAMMA0_THRESHOLD`]) mark the degenerate second eigenvalue.
const DEGENERATE_DENOMINATOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeBranch {
    /// `r = 1`, `ϱ₁, ϱ₂` from the explicit coefficient formulas.
    Regular,
    /// Rescaled `γ → 0` limit of the second eigenvector, `r = 0`.
    GammaZeroLimit,
}

/// One bound state: eigenvalue, coefficient vector and its c-norm.
///
/// Phase convention: `Ψ(0) = 2r` is real and positive, which for the regular
/// branch means `r = 1`. The limit branch has `r = 0` and carries the factor
/// `-i(1 - 2k)/k` on `(ϱ₁, ϱ₂) = (1, 1)`.
///
/// The coefficients are stored unnormalised; `c_norm = ∫Ψ² dx` is kept
/// alongside and divided out only where a normalised state is needed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub k: ComplexK,
    pub r: Complex64,
    pub rho1: Complex64,
    pub rho2: Complex64,
    pub a_coef: Complex64,
    pub b_coef: Complex64,
    pub c_norm: Complex64,
    pub branch: ModeBranch,
}

impl Mode {
    pub fn coefficient_vector(&self) -> Vector3<Complex64> {
        Vector3::new(self.r, self.rho1, self.rho2)
    }

    /// `‖𝓜v‖ / (‖𝓜‖·‖v‖)` for `v = (r, ϱ₁, ϱ₂)`.
    pub fn null_space_residual(&self, p: &SystemParams) -> f64 {
        let m = build_matrix(self.k, p);
        let v = self.coefficient_vector();
        let mv = m * v;
        mv.norm() / (frobenius_norm(&m) * v.norm())
    }

    pub fn wavefunction(&self, p: &SystemParams) -> PiecewiseWavefunction {
        PiecewiseWavefunction::new(*self, *p)
    }

    /// c-norm of the mode rescaled to unit `∫|Ψ|² dx`. Its magnitude is one
    /// for a real wavefunction and vanishes at an exceptional point.
    pub fn normalized_c_norm(&self, p: &SystemParams) -> Complex64 {
        self.c_norm / self.wavefunction(p).l2_norm()
    }

    fn from_coefficients(
        k: ComplexK,
        p: &SystemParams,
        r: Complex64,
        rho1: Complex64,
        rho2: Complex64,
        branch: ModeBranch,
    ) -> Self {
        let e = (2.0 * k.value() * p.b()).exp();
        let a_coef = r * (1.0 + e) + rho1 * (1.0 - e);
        let b_coef = r * (1.0 + e) + rho2 * (e - 1.0);
        let mut mode = Mode {
            k,
            r,
            rho1,
            rho2,
            a_coef,
            b_coef,
            c_norm: Complex64::new(0.0, 0.0),
            branch,
        };
        mode.c_norm = mode.wavefunction(p).c_norm();
        mode
    }
}

/// Mode for an eigenvalue `k` using the explicit coefficient formulas with
/// `r = 1`.
///
/// Fails with [`Error::DegenerateCoefficients`] at the second eigenvalue when
/// `γ < 1e-6`, where both formula denominators vanish; use
/// [`mode_coefficients_gamma0`] there.
pub fn mode_coefficients(k: ComplexK, p: &SystemParams) -> Result<Mode> {
    let kv = k.value();
    let residual = ExpPolynomial::secular(p).scaled_residual(kv);
    if residual > ROOT_TOLERANCE {
        return Err(Error::NotARoot { k: kv, residual });
    }

    let kappa = p.kappa0();
    let kappa_c = kappa.conj();
    let e = (-2.0 * kv * p.b()).exp();
    let num1 = kappa * e + kappa - 2.0 * kv;
    let den1 = kappa * e - kappa + 2.0 * kv;
    let num2 = kappa_c * e + kappa_c - 2.0 * kv;
    let den2 = kappa_c * e - kappa_c + 2.0 * kv;

    let singular = den1.norm() == 0.0 || den2.norm() == 0.0;
    let near_limit = p.gamma() < GAMMA0_THRESHOLD
        && (den1.norm() < DEGENERATE_DENOMINATOR || den2.norm() < DEGENERATE_DENOMINATOR);
    if singular || near_limit {
        return Err(Error::DegenerateCoefficients {
            k: kv,
            gamma: p.gamma(),
        });
    }

    let one = Complex64::new(1.0, 0.0);
    let rho1 = -num1 / den1;
    let rho2 = num2 / den2;
    Ok(Mode::from_coefficients(
        k,
        p,
        one,
        rho1,
        rho2,
        ModeBranch::Regular,
    ))
}

/// Limit `γ·(r, ϱ₁, ϱ₂) → -i(1 - 2k₂)/k₂ · (0, 1, 1)` of the second eigenvector
/// as `γ → 0`.
///
/// `k₂` must solve `e^{-2k₂b} + 2k₂ - 1 = 0`, i.e. `b = -ln(1 - 2k₂)/(2k₂)`.
pub fn mode_coefficients_gamma0(k2: ComplexK, p: &SystemParams) -> Result<Mode> {
    if p.gamma() >= GAMMA0_THRESHOLD {
        return Err(Error::InvalidParameter(format!(
            "limit branch requires gamma < {GAMMA0_THRESHOLD:e}, got {}",
            p.gamma()
        )));
    }
    let kv = k2.value();
    let cond = second_root_condition(kv, p.b());
    let scale = (-2.0 * kv * p.b()).exp().norm() + 2.0 * kv.norm() + 1.0;
    let residual = cond.norm() / scale;
    if residual > ROOT_TOLERANCE {
        return Err(Error::NotSecondRoot { k: kv, residual });
    }
    let amplitude = -Complex64::i() * (1.0 - 2.0 * kv) / kv;
    Ok(Mode::from_coefficients(
        k2,
        p,
        Complex64::new(0.0, 0.0),
        amplitude,
        amplitude,
        ModeBranch::GammaZeroLimit,
    ))
}

/// Picks the regular or the limit branch as appropriate.
pub fn mode_for_root(k: ComplexK, p: &SystemParams) -> Result<Mode> {
    match mode_coefficients(k, p) {
        Err(Error::DegenerateCoefficients { .. }) => mode_coefficients_gamma0(k, p),
        other => other,
    }
}
