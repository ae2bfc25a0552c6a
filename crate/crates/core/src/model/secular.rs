//! The secular function `det 𝓜(k)` in closed form and its derivatives.
//!
//! Collecting powers of `E = e^{-2kb}` the determinant is an exponential
//! polynomial
//!
//! ```text
//! f(k) = q(Γ + 2k) E² + 2Γ(2k - q) E + (Γ - 2k)(γ² + (2k - 1)²),   q = 1 + γ²
//! ```
//!
//! i.e. a sum of terms `P_m(k) e^{-2mbk}` with real polynomial coefficients.
//! [`ExpPolynomial`] stores that form; every k-derivative and every partial
//! derivative in `b` or `γ` is again an exponential polynomial, which gives
//! exact Jacobians for the exceptional-point solver.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{ComplexK, SystemParams};

#[derive(Debug, Clone, PartialEq)]
struct ExpTerm {
    /// Polynomial coefficients in ascending powers of `k`.
    coeffs: Vec<f64>,
    /// Exponent rate divided by `b`: the term carries `e^{rate_per_b · b · k}`.
    rate_per_b: f64,
}

/// `Σ_m P_m(k) · exp(r_m · b · k)` with real polynomials `P_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolynomial {
    terms: Vec<ExpTerm>,
    b: f64,
}

impl ExpPolynomial {
    /// The secular function of the model.
    pub fn secular(p: &SystemParams) -> Self {
        let g = p.big_gamma();
        let q = 1.0 + p.gamma() * p.gamma();
        Self {
            terms: vec![
                ExpTerm {
                    coeffs: vec![g * q, -4.0 * g - 2.0 * q, 4.0 * g + 8.0, -8.0],
                    rate_per_b: 0.0,
                },
                ExpTerm {
                    coeffs: vec![-2.0 * g * q, 4.0 * g],
                    rate_per_b: -2.0,
                },
                ExpTerm {
                    coeffs: vec![g * q, 2.0 * q],
                    rate_per_b: -4.0,
                },
            ],
            b: p.b(),
        }
    }

    /// Partial derivative of the secular function with respect to `γ`.
    pub fn secular_gamma_partial(p: &SystemParams) -> Self {
        let g = p.big_gamma();
        let two_gamma = 2.0 * p.gamma();
        Self {
            terms: vec![
                ExpTerm {
                    coeffs: vec![two_gamma * g, -2.0 * two_gamma],
                    rate_per_b: 0.0,
                },
                ExpTerm {
                    coeffs: vec![-2.0 * two_gamma * g],
                    rate_per_b: -2.0,
                },
                ExpTerm {
                    coeffs: vec![two_gamma * g, 2.0 * two_gamma],
                    rate_per_b: -4.0,
                },
            ],
            b: p.b(),
        }
    }

    /// `d/dk`.
    pub fn derivative(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let rate = t.rate_per_b * self.b;
                let n = t.coeffs.len();
                let coeffs = (0..n)
                    .map(|j| {
                        let from_poly = if j + 1 < n {
                            (j + 1) as f64 * t.coeffs[j + 1]
                        } else {
                            0.0
                        };
                        from_poly + rate * t.coeffs[j]
                    })
                    .collect();
                ExpTerm {
                    coeffs,
                    rate_per_b: t.rate_per_b,
                }
            })
            .collect();
        Self { terms, b: self.b }
    }

    pub fn nth_derivative(&self, order: usize) -> Self {
        (0..order).fold(self.clone(), |acc, _| acc.derivative())
    }

    /// `∂/∂b`: each term gains a factor `rate_per_b · k`.
    pub fn b_partial(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut coeffs = Vec::with_capacity(t.coeffs.len() + 1);
                coeffs.push(0.0);
                coeffs.extend(t.coeffs.iter().map(|c| c * t.rate_per_b));
                ExpTerm {
                    coeffs,
                    rate_per_b: t.rate_per_b,
                }
            })
            .collect();
        Self { terms, b: self.b }
    }

    pub fn eval(&self, k: Complex64) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                let poly = t
                    .coeffs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * k + c);
                poly * (k * (t.rate_per_b * self.b)).exp()
            })
            .sum()
    }

    pub fn eval_real(&self, k: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let poly = t.coeffs.iter().rev().fold(0.0, |acc, &c| acc * k + c);
                poly * (t.rate_per_b * self.b * k).exp()
            })
            .sum()
    }

    /// Sum of the magnitudes of all monomial terms at `k`; the natural scale
    /// against which a residual `|f(k)|` is judged.
    pub fn magnitude(&self, k: Complex64) -> f64 {
        let abs_k = k.norm();
        self.terms
            .iter()
            .map(|t| {
                let poly: f64 = t
                    .coeffs
                    .iter()
                    .rev()
                    .fold(0.0, |acc, &c| acc * abs_k + c.abs());
                poly * (t.rate_per_b * self.b * k.re).exp()
            })
            .sum()
    }

    /// `|f(k)| / magnitude(k)`.
    pub fn scaled_residual(&self, k: Complex64) -> f64 {
        let scale = self.magnitude(k);
        if scale == 0.0 {
            return self.eval(k).norm();
        }
        self.eval(k).norm() / scale
    }
}

/// Closed-form secular function, written term by term as
/// `Γ(e^{-4kb}(1+γ²) - 2e^{-2kb}(γ² - 2k + 1) + γ² + (2k-1)²)
///   + 2k(e^{-4kb}(1+γ²) - γ² - (2k-1)²)`.
pub fn secular_det(k: ComplexK, p: &SystemParams) -> Complex64 {
    let k = k.value();
    let g2 = p.gamma() * p.gamma();
    let e2 = (-2.0 * k * p.b()).exp();
    let e4 = e2 * e2;
    let two_k_minus_one = 2.0 * k - 1.0;
    let sq = two_k_minus_one * two_k_minus_one;
    p.big_gamma() * (e4 * (1.0 + g2) - 2.0 * e2 * (g2 - 2.0 * k + 1.0) + g2 + sq)
        + 2.0 * k * (e4 * (1.0 + g2) - g2 - sq)
}

/// Real-axis evaluation in real arithmetic.
pub fn secular_det_real(k: f64, p: &SystemParams) -> f64 {
    ExpPolynomial::secular(p).eval_real(k)
}

/// First or second k-derivative of the secular function.
pub fn secular_det_derivs(k: ComplexK, p: &SystemParams, order: u8) -> Result<Complex64> {
    match order {
        1 | 2 => Ok(ExpPolynomial::secular(p)
            .nth_derivative(order as usize)
            .eval(k.value())),
        other => Err(Error::UnsupportedOrder(other)),
    }
}

/// The Hermitian (`γ = 0`) factorisation
/// `(E + 2k - 1)(Γ(E + 2k - 1) + 2k(E - 2k + 1))` with `E = e^{-2kb}`.
pub fn gamma0_factorized(k: Complex64, b: f64, big_gamma: f64) -> Complex64 {
    let e = (-2.0 * k * b).exp();
    let antisym = second_root_condition(k, b);
    antisym * (big_gamma * antisym + 2.0 * k * (e - 2.0 * k + 1.0))
}

/// `e^{-2kb} + 2k - 1`; vanishes at the antisymmetric root of the `γ = 0`
/// problem.
pub fn second_root_condition(k: Complex64, b: f64) -> Complex64 {
    (-2.0 * k * b).exp() + 2.0 * k - 1.0
}
