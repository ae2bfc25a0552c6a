use num_complex::Complex64;

use super::mode::Mode;
use crate::params::SystemParams;

/// One region of the piecewise solution, `Ψ(x) = u·e^{kx} + v·e^{-kx}` on
/// `[lo, hi]`. Infinite bounds mark the two outer regions.
#[derive(Debug, Clone, Copy)]
struct Piece {
    lo: f64,
    hi: f64,
    u: Complex64,
    v: Complex64,
}

/// Bound-state wavefunction assembled from a [`Mode`]:
///
/// ```text
/// Ψ(x) = A e^{kx}                      x < -b
///        2(r cosh kx + ϱ₁ sinh kx)     -b < x < 0
///        2(r cosh kx + ϱ₂ sinh kx)     0 < x < b
///        B e^{-kx}                     b < x
/// ```
#[derive(Debug, Clone, Copy)]
pub struct PiecewiseWavefunction {
    mode: Mode,
    params: SystemParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl PiecewiseWavefunction {
    pub fn new(mode: Mode, params: SystemParams) -> Self {
        Self { mode, params }
    }

    pub fn mode(&self) -> &Mode {
        &self.mode
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    fn pieces(&self) -> [Piece; 4] {
        let b = self.params.b();
        let m = &self.mode;
        let zero = Complex64::new(0.0, 0.0);
        [
            Piece {
                lo: f64::NEG_INFINITY,
                hi: -b,
                u: m.a_coef,
                v: zero,
            },
            Piece {
                lo: -b,
                hi: 0.0,
                u: m.r + m.rho1,
                v: m.r - m.rho1,
            },
            Piece {
                lo: 0.0,
                hi: b,
                u: m.r + m.rho2,
                v: m.r - m.rho2,
            },
            Piece {
                lo: b,
                hi: f64::INFINITY,
                u: zero,
                v: m.b_coef,
            },
        ]
    }

    fn piece_at(&self, x: f64, side: Side) -> Piece {
        let b = self.params.b();
        let pieces = self.pieces();
        let idx = match side {
            Side::Right => {
                if x < -b {
                    0
                } else if x < 0.0 {
                    1
                } else if x < b {
                    2
                } else {
                    3
                }
            }
            Side::Left => {
                if x <= -b {
                    0
                } else if x <= 0.0 {
                    1
                } else if x <= b {
                    2
                } else {
                    3
                }
            }
        };
        pieces[idx]
    }

    fn eval_piece(&self, piece: &Piece, x: f64) -> Complex64 {
        let k = self.mode.k.value();
        let mut val = Complex64::new(0.0, 0.0);
        if piece.u != Complex64::new(0.0, 0.0) {
            val += piece.u * (k * x).exp();
        }
        if piece.v != Complex64::new(0.0, 0.0) {
            val += piece.v * (-k * x).exp();
        }
        val
    }

    fn derivative_piece(&self, piece: &Piece, x: f64) -> Complex64 {
        let k = self.mode.k.value();
        let mut val = Complex64::new(0.0, 0.0);
        if piece.u != Complex64::new(0.0, 0.0) {
            val += piece.u * (k * x).exp();
        }
        if piece.v != Complex64::new(0.0, 0.0) {
            val -= piece.v * (-k * x).exp();
        }
        k * val
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.eval_piece(&self.piece_at(x, Side::Right), x)
    }

    /// One-sided limit `Ψ(x₀∓)` taken with the branch on the given side.
    pub fn eval_one_sided(&self, x: f64, side: Side) -> Complex64 {
        self.eval_piece(&self.piece_at(x, side), x)
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        self.derivative_piece(&self.piece_at(x, Side::Right), x)
    }

    pub fn derivative_one_sided(&self, x: f64, side: Side) -> Complex64 {
        self.derivative_piece(&self.piece_at(x, side), x)
    }

    /// `∫Ψ(x)² dx` over the real line, no complex conjugation.
    pub fn c_norm(&self) -> Complex64 {
        let k = self.mode.k.value();
        let zero = Complex64::new(0.0, 0.0);
        self.pieces()
            .iter()
            .map(|p| {
                let mut total = zero;
                if p.u != zero {
                    total += p.u * p.u * integral_exp(2.0 * k, p.lo, p.hi);
                }
                if p.v != zero {
                    total += p.v * p.v * integral_exp(-2.0 * k, p.lo, p.hi);
                }
                if p.u != zero && p.v != zero {
                    total += 2.0 * p.u * p.v * (p.hi - p.lo);
                }
                total
            })
            .sum()
    }

    /// `∫|Ψ(x)|² dx` over the real line.
    pub fn l2_norm(&self) -> f64 {
        let k = self.mode.k.value();
        let kappa = Complex64::new(k.re, 0.0);
        let osc = Complex64::new(0.0, 2.0 * k.im);
        let zero = Complex64::new(0.0, 0.0);
        self.pieces()
            .iter()
            .map(|p| {
                let mut total = 0.0;
                if p.u != zero {
                    total += p.u.norm_sqr() * integral_exp(2.0 * kappa, p.lo, p.hi).re;
                }
                if p.v != zero {
                    total += p.v.norm_sqr() * integral_exp(-2.0 * kappa, p.lo, p.hi).re;
                }
                if p.u != zero && p.v != zero {
                    total += 2.0 * (p.u * p.v.conj() * integral_exp(osc, p.lo, p.hi)).re;
                }
                total
            })
            .sum()
    }
}

/// `Ψ(x)` for mode `m` at parameters `p`.
pub fn eval_wavefunction(m: &Mode, p: &SystemParams, x: f64) -> Complex64 {
    PiecewiseWavefunction::new(*m, *p).eval(x)
}

/// c-norm `⟨Ψ̃|Ψ⟩ = ∫Ψ² dx` in closed form.
pub fn c_norm(m: &Mode, p: &SystemParams) -> Complex64 {
    PiecewiseWavefunction::new(*m, *p).c_norm()
}

/// `∫_lo^hi e^{s x} dx`; an infinite bound requires the integrand to decay
/// there.
fn integral_exp(s: Complex64, lo: f64, hi: f64) -> Complex64 {
    match (lo.is_finite(), hi.is_finite()) {
        (false, true) => (s * hi).exp() / s,
        (true, false) => -(s * lo).exp() / s,
        (true, true) => {
            let len = hi - lo;
            (s * lo).exp() * len * exprel(s * len)
        }
        (false, false) => unreachable!("no region spans the whole line"),
    }
}

/// `(e^z - 1)/z`, accurate near `z = 0`.
fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        1.0 + z / 2.0 + z * z / 6.0 + z * z * z / 24.0
    } else {
        (z.exp() - 1.0) / z
    }
}
