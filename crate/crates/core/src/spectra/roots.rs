use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::mode::ROOT_TOLERANCE;
use crate::model::secular::ExpPolynomial;
use crate::params::{ComplexK, SystemParams};

/// Grid step of the sign-change scan on the real axis.
pub const SCAN_STEP: f64 = 1e-4;

/// Lower end of the real scan. `k = 0` is always a root of the secular
/// function but carries no normalisable state.
pub const K_MIN: f64 = 1e-6;

/// Roots closer than this (relative to `max(1, |k|)`) count as coincident.
pub const DISTINCT_ROOTS: f64 = 1e-8;

const NEWTON_MAX_ITER: usize = 100;
const NEWTON_MAX_STEP: f64 = 0.1;

/// All bound-state eigenvalues found at one parameter point.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumResult {
    pub params: SystemParams,
    /// Sorted by descending `Re k`, conjugate pairs with the `Im k > 0` member
    /// first.
    pub roots: Vec<ComplexK>,
    /// Scaled secular residual of each root.
    pub residuals: Vec<f64>,
    /// Two roots lie within [`DISTINCT_ROOTS`] of each other.
    pub near_degenerate: bool,
}

impl SpectrumResult {
    fn new(params: SystemParams, mut roots: Vec<Complex64>) -> Self {
        roots.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
        let poly = ExpPolynomial::secular(&params);
        let residuals = roots.iter().map(|&k| poly.scaled_residual(k)).collect();
        let near_degenerate = roots.iter().enumerate().any(|(i, a)| {
            roots[i + 1..]
                .iter()
                .any(|b| (a - b).norm() <= DISTINCT_ROOTS * a.norm().max(1.0))
        });
        let roots = roots
            .into_iter()
            .map(|k| ComplexK::from_complex(k).expect("roots are kept in Re k > 0"))
            .collect();
        Self {
            params,
            roots,
            residuals,
            near_degenerate,
        }
    }

    pub fn real_roots(&self) -> Vec<f64> {
        self.roots
            .iter()
            .filter(|k| k.im() == 0.0)
            .map(|k| k.re())
            .collect()
    }

    pub fn count_real(&self) -> usize {
        self.roots.iter().filter(|k| k.im() == 0.0).count()
    }
}

/// Real roots in `(K_MIN, k_max)`, descending.
pub fn find_real_roots(p: &SystemParams, k_max: f64) -> Vec<f64> {
    find_real_roots_with_step(p, k_max, SCAN_STEP)
}

/// As [`find_real_roots`] with an explicit scan step.
pub fn find_real_roots_with_step(p: &SystemParams, k_max: f64, step: f64) -> Vec<f64> {
    let poly = ExpPolynomial::secular(p);
    let f = |k: f64| poly.eval_real(k);
    let n = ((k_max - K_MIN) / step).ceil().max(0.0) as usize;
    let mut roots = Vec::new();
    let mut prev_k = K_MIN;
    let mut prev_f = f(prev_k);
    for i in 1..=n {
        let k = (K_MIN + i as f64 * step).min(k_max);
        let fk = f(k);
        if fk == 0.0 {
            roots.push(k);
        } else if prev_f != 0.0 && (prev_f < 0.0) != (fk < 0.0) {
            roots.push(bisect(&f, prev_k, k, prev_f));
        }
        prev_k = k;
        prev_f = fk;
    }
    roots.reverse();
    roots
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let lo_negative = f_lo < 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Decoupled-limit eigenvalues `Γ/2` and `(1 ± iγ)/2`.
pub fn default_seeds(p: &SystemParams) -> Vec<ComplexK> {
    let half = 0.5;
    [
        Complex64::new(p.big_gamma() * half, 0.0),
        Complex64::new(half, p.gamma() * half),
        Complex64::new(half, -p.gamma() * half),
    ]
    .into_iter()
    .filter_map(|k| ComplexK::from_complex(k).ok())
    .collect()
}

/// Outcome of a Newton search from a list of seeds.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRootSearch {
    pub roots: Vec<ComplexK>,
    /// One entry per seed that failed to converge to a new root.
    pub failures: Vec<Error>,
}

/// Newton iteration on the secular function from each seed, deflating `k = 0`
/// and every root already found so that distinct seeds reach distinct roots.
pub fn find_complex_roots(p: &SystemParams, seeds: &[ComplexK]) -> Result<ComplexRootSearch> {
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("no seeds supplied".into()));
    }
    let solver = DeflatedNewton::new(p);
    let mut known: Vec<Complex64> = Vec::new();
    let mut failures = Vec::new();
    for seed in seeds {
        match solver.solve(seed.value(), &known) {
            Some(k) => known.push(k),
            None => failures.push(Error::RootNonConvergence { seed: seed.value() }),
        }
    }
    Ok(ComplexRootSearch {
        roots: known
            .into_iter()
            .map(|k| ComplexK::from_complex(k).expect("Re k > 0 checked"))
            .collect(),
        failures,
    })
}

struct DeflatedNewton {
    poly: ExpPolynomial,
    dpoly: ExpPolynomial,
}

impl DeflatedNewton {
    fn new(p: &SystemParams) -> Self {
        let poly = ExpPolynomial::secular(p);
        let dpoly = poly.derivative();
        Self { poly, dpoly }
    }

    fn is_new(&self, k: Complex64, known: &[Complex64]) -> bool {
        known
            .iter()
            .all(|r| (k - r).norm() > DISTINCT_ROOTS * k.norm().max(1.0))
    }

    fn solve(&self, seed: Complex64, known: &[Complex64]) -> Option<Complex64> {
        let mut k = seed;
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let f = self.poly.eval(k);
            if f == Complex64::new(0.0, 0.0) || self.poly.scaled_residual(k) <= 1e-15 {
                converged = true;
                break;
            }
            let mut ratio = self.dpoly.eval(k) / f - 1.0 / k;
            for r in known {
                ratio -= 1.0 / (k - r);
            }
            let mut step = 1.0 / ratio;
            if !step.is_finite() {
                return None;
            }
            if step.norm() > NEWTON_MAX_STEP {
                step *= NEWTON_MAX_STEP / step.norm();
            }
            k -= step;
            if k.re < -0.5 || !k.is_finite() {
                return None;
            }
            if step.norm() <= 1e-15 * k.norm().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return None;
        }
        // A few undeflated steps remove the error carried by the deflation
        // factors.
        for _ in 0..3 {
            let d = self.dpoly.eval(k);
            if d == Complex64::new(0.0, 0.0) {
                break;
            }
            let step = self.poly.eval(k) / d;
            if step.norm() > 1e-6 {
                break;
            }
            k -= step;
        }
        if k.im.abs() <= 1e-14 * k.re.abs() {
            k.im = 0.0;
        }
        let ok =
            k.re > K_MIN && self.poly.scaled_residual(k) <= ROOT_TOLERANCE && self.is_new(k, known);
        ok.then_some(k)
    }
}

/// Every bound-state eigenvalue with `Re k > 0`: real roots by scanning, then
/// complex roots by deflated Newton from the decoupled-limit seeds and from
/// near-misses of the real scan.
pub fn spectrum(p: &SystemParams) -> SpectrumResult {
    spectrum_with_seeds(p, &[])
}

/// At most three roots exist in the right half plane.
const MAX_BOUND_STATES: usize = 3;

/// As [`spectrum`], trying `extra_seeds` first (used by continuation).
pub fn spectrum_with_seeds(p: &SystemParams, extra_seeds: &[Complex64]) -> SpectrumResult {
    let k_max = p.big_gamma().max(1.0);
    let mut roots: Vec<Complex64> = find_real_roots(p, k_max)
        .into_iter()
        .map(|k| Complex64::new(k, 0.0))
        .collect();
    if roots.len() >= MAX_BOUND_STATES {
        return SpectrumResult::new(*p, roots);
    }

    let solver = DeflatedNewton::new(p);
    let mut seeds: Vec<Complex64> = extra_seeds
        .iter()
        .copied()
        .filter(|s| s.im != 0.0)
        .collect();
    seeds.extend(default_seeds(p).into_iter().map(ComplexK::value));
    seeds.extend(near_miss_seeds(p, k_max));

    for seed in seeds {
        if roots.len() >= MAX_BOUND_STATES {
            break;
        }
        if let Some(k) = solver.solve(seed, &roots) {
            roots.push(k);
            if k.im != 0.0 {
                let c = k.conj();
                if solver.is_new(c, &roots) && solver.poly.scaled_residual(c) <= ROOT_TOLERANCE {
                    roots.push(c);
                }
            }
        }
    }
    SpectrumResult::new(*p, roots)
}

/// Local minima of the scaled secular function on the real axis without a
/// sign change: a conjugate pair that has just left the axis sits nearby.
fn near_miss_seeds(p: &SystemParams, k_max: f64) -> Vec<Complex64> {
    let poly = ExpPolynomial::secular(p);
    let step = 1e-3;
    let n = ((k_max - K_MIN) / step) as usize;
    let vals: Vec<(f64, f64)> = (0..=n)
        .map(|i| {
            let k = K_MIN + i as f64 * step;
            let f = poly.eval_real(k);
            let scale = poly.magnitude(Complex64::new(k, 0.0));
            (k, f / scale)
        })
        .collect();
    let mut seeds = Vec::new();
    for w in vals.windows(3) {
        let (a, b, c) = (w[0].1, w[1].1, w[2].1);
        let same_sign = (a < 0.0) == (b < 0.0) && (b < 0.0) == (c < 0.0);
        if same_sign && b.abs() < a.abs() && b.abs() <= c.abs() {
            for im in [1e-3, 1e-2, 5e-2] {
                seeds.push(Complex64::new(w[1].0, im));
            }
        }
    }
    seeds
}
