//! Third-order exceptional points.
//!
//! On the real axis the secular function `f` is real, so a triple real root
//! is the solution of three real equations `f = ∂f/∂k = ∂²f/∂k² = 0` in the
//! three unknowns `(γ, b, k)` at fixed `Γ`. The system is solved by damped
//! Newton with the exact Jacobian assembled from [`ExpPolynomial`] partials.

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::error::{Error, Result};
use crate::model::secular::ExpPolynomial;
use crate::params::SystemParams;

/// Bound on every scaled condition residual of an accepted EP3.
pub const EP3_TOLERANCE: f64 = 1e-9;

/// `Γ` at which the default guess is known to converge.
pub const REFERENCE_BIG_GAMMA: f64 = 1.002;

const MAX_ITERATIONS: usize = 200;
const MERIT_NOISE_FLOOR: f64 = 1e-14;
/// Scaled residuals below this are rounding noise; further steps only wander.
const RESIDUAL_NOISE_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ep3Guess {
    pub gamma: f64,
    pub b: f64,
    pub k: f64,
}

impl Default for Ep3Guess {
    /// Suitable for `Γ` near [`REFERENCE_BIG_GAMMA`].
    fn default() -> Self {
        Self {
            gamma: 0.06,
            b: 6.2,
            k: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ep3Solution {
    pub big_gamma: f64,
    pub gamma: f64,
    pub b: f64,
    pub k: f64,
    /// Scaled `|f|, |f'|, |f''|` at the solution.
    pub condition_residuals: [f64; 3],
    pub iterations: usize,
}

impl Ep3Solution {
    pub fn params(&self) -> SystemParams {
        SystemParams::new(self.gamma, self.b, self.big_gamma).expect("validated on construction")
    }

    pub fn as_guess(&self) -> Ep3Guess {
        Ep3Guess {
            gamma: self.gamma,
            b: self.b,
            k: self.k,
        }
    }
}

struct Conditions {
    values: Vector3<f64>,
    scales: Vector3<f64>,
    jacobian: Matrix3<f64>,
}

impl Conditions {
    /// `x = (γ, b, k)`.
    fn at(big_gamma: f64, x: &Vector3<f64>) -> Option<Self> {
        let (gamma, b, k) = (x[0], x[1], x[2]);
        if !(k > 0.0 && k.is_finite()) {
            return None;
        }
        let p = SystemParams::new(gamma, b, big_gamma).ok()?;
        let f = ExpPolynomial::secular(&p);
        let f1 = f.derivative();
        let f2 = f1.derivative();
        let f3 = f2.derivative();
        let fg = ExpPolynomial::secular_gamma_partial(&p);
        let fg1 = fg.derivative();
        let fb = f.b_partial();
        let fb1 = fb.derivative();
        let kc = nalgebra::Complex::new(k, 0.0);
        let values = Vector3::new(f.eval_real(k), f1.eval_real(k), f2.eval_real(k));
        let scales = Vector3::new(f.magnitude(kc), f1.magnitude(kc), f2.magnitude(kc));
        let jacobian = Matrix3::new(
            fg.eval_real(k),
            fb.eval_real(k),
            f1.eval_real(k),
            fg1.eval_real(k),
            fb1.eval_real(k),
            f2.eval_real(k),
            fg1.derivative().eval_real(k),
            fb1.derivative().eval_real(k),
            f3.eval_real(k),
        );
        Some(Self {
            values,
            scales,
            jacobian,
        })
    }

    fn scaled(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.values[i].abs() / self.scales[i])
    }

    fn merit(&self, scales: &Vector3<f64>) -> f64 {
        self.values.component_div(scales).norm()
    }
}

/// Locates the EP3 at fixed `Γ` from an initial guess.
pub fn find_ep3(big_gamma: f64, guess: Ep3Guess) -> Result<Ep3Solution> {
    if !(big_gamma.is_finite() && big_gamma > 0.0) {
        return Err(Error::OutOfRange(format!(
            "Gamma must be positive and finite, got {big_gamma}"
        )));
    }
    if !(guess.gamma.is_finite() && guess.b.is_finite() && guess.k.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "guess is not finite: {guess:?}"
        )));
    }
    let mut x = Vector3::new(guess.gamma.abs(), guess.b, guess.k);
    let mut cond = Conditions::at(big_gamma, &x).ok_or_else(|| {
        Error::InvalidParameter(format!("guess outside the admissible domain: {guess:?}"))
    })?;

    let fail = |iterations: usize, x: &Vector3<f64>, cond: &Conditions| Error::Ep3NonConvergence {
        iterations,
        gamma: x[0],
        b: x[1],
        k: x[2],
        residuals: cond.scaled(),
    };

    for iteration in 1..=MAX_ITERATIONS {
        let delta = match cond.jacobian.lu().solve(&(-cond.values)) {
            Some(d) if d.iter().all(|v| v.is_finite()) => d,
            _ => return Err(fail(iteration, &x, &cond)),
        };
        let frozen = cond.scales;
        let merit0 = cond.merit(&frozen);

        let mut lambda = 1.0;
        let mut accepted = None;
        while lambda >= 1e-12 {
            let trial = x + delta * lambda;
            if let Some(c) = Conditions::at(big_gamma, &trial) {
                let m = c.merit(&frozen);
                if m < merit0 || m <= MERIT_NOISE_FLOOR {
                    accepted = Some((trial, c));
                    break;
                }
            }
            lambda *= 0.5;
        }

        let step = match accepted {
            Some((trial, c)) => {
                let step = (trial - x).norm();
                x = trial;
                cond = c;
                step
            }
            None => 0.0,
        };
        let residuals = cond.scaled();
        let small_residual = residuals.iter().all(|&r| r <= EP3_TOLERANCE);
        let at_noise_floor = residuals.iter().all(|&r| r <= RESIDUAL_NOISE_FLOOR);
        if small_residual && (at_noise_floor || step <= 1e-12 * (1.0 + x.norm())) {
            return Ok(Ep3Solution {
                big_gamma,
                gamma: x[0],
                b: x[1],
                k: x[2],
                condition_residuals: residuals,
                iterations: iteration,
            });
        }
        if step == 0.0 {
            return Err(fail(iteration, &x, &cond));
        }
    }
    Err(fail(MAX_ITERATIONS, &x, &cond))
}

/// Continues a known EP3 in `Γ` to `target`, with secant prediction and step
/// halving on failure.
///
/// The family through `Γ = 1.002` runs from `Γ → 1⁺` (where `b → ∞`,
/// `γ → 0`) up to a fold near `Γ ≈ 1.1175`. A target outside the part that
/// can be reached gives [`Error::OutOfRange`] naming the last converged `Γ`.
pub fn continue_ep3(from: &Ep3Solution, target: f64) -> Result<Ep3Solution> {
    const INITIAL_STEP: f64 = 0.005;
    const MIN_STEP: f64 = 1e-7;

    let mut current = *from;
    let mut previous: Option<Ep3Solution> = None;
    let mut step = INITIAL_STEP;
    while current.big_gamma != target {
        let remaining = target - current.big_gamma;
        let h = remaining.signum() * step.min(remaining.abs());
        let next_gamma = if h.abs() >= remaining.abs() {
            target
        } else {
            current.big_gamma + h
        };
        let guess = match previous {
            Some(prev) if prev.big_gamma != current.big_gamma => {
                let t = (next_gamma - current.big_gamma) / (current.big_gamma - prev.big_gamma);
                Ep3Guess {
                    gamma: current.gamma + t * (current.gamma - prev.gamma),
                    b: current.b + t * (current.b - prev.b),
                    k: current.k + t * (current.k - prev.k),
                }
            }
            _ => current.as_guess(),
        };
        match find_ep3(next_gamma, guess) {
            Ok(sol) if (sol.k - current.k).abs() < 0.1 => {
                previous = Some(current);
                current = sol;
                step = (step * 1.5).min(INITIAL_STEP * 4.0);
            }
            Ok(_) | Err(_) if step > MIN_STEP => step *= 0.5,
            _ => {
                return Err(Error::OutOfRange(format!(
                    "EP3 family not continuable past Gamma = {} (last point gamma = {}, b = {}, k = {})",
                    current.big_gamma, current.gamma, current.b, current.k
                )))
            }
        }
    }
    Ok(current)
}

/// EP3 at any `Γ` reachable by continuation from the reference solution at
/// `Γ = 1.002` with the default guess.
pub fn find_ep3_continued(big_gamma: f64) -> Result<Ep3Solution> {
    let reference = find_ep3(REFERENCE_BIG_GAMMA, Ep3Guess::default())?;
    if big_gamma == REFERENCE_BIG_GAMMA {
        return Ok(reference);
    }
    continue_ep3(&reference, big_gamma)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ep3TraceFailure {
    pub big_gamma: f64,
    pub error: Error,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ep3Trace {
    pub solutions: Vec<Ep3Solution>,
    /// `γ_EP3` strictly increases with `Γ` over the traced points.
    pub gamma_increasing: bool,
    /// `b_EP3` strictly decreases with `Γ` over the traced points.
    pub b_decreasing: bool,
    /// First point where continuation failed, if any.
    pub failure: Option<Ep3TraceFailure>,
}

/// EP3 family on `steps` equally spaced `Γ` values spanning `range`
/// (inclusive). A single step returns the solution at `range.0`.
pub fn trace_ep3_family(range: (f64, f64), steps: usize) -> Result<Ep3Trace> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo > 0.0 && hi >= lo) {
        return Err(Error::InvalidParameter(format!(
            "Gamma range must satisfy 0 < lo <= hi, got ({lo}, {hi})"
        )));
    }
    if steps == 0 {
        return Err(Error::InvalidParameter("steps must be >= 1".into()));
    }
    let first = find_ep3_continued(lo)?;
    let mut solutions = vec![first];
    let mut failure = None;
    for i in 1..steps {
        let target = lo + (hi - lo) * i as f64 / (steps - 1) as f64;
        let last = *solutions.last().expect("nonempty");
        match continue_ep3(&last, target) {
            Ok(sol) => solutions.push(sol),
            Err(error) => {
                failure = Some(Ep3TraceFailure {
                    big_gamma: target,
                    error,
                });
                break;
            }
        }
    }
    let gamma_increasing = solutions.windows(2).all(|w| w[1].gamma > w[0].gamma);
    let b_decreasing = solutions.windows(2).all(|w| w[1].b < w[0].b);
    Ok(Ep3Trace {
        solutions,
        gamma_increasing,
        b_decreasing,
        failure,
    })
}

/// A point near an EP3 with three real eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproachPoint {
    pub params: SystemParams,
    /// Middle root, where `f = f'' = 0`.
    pub k_centre: f64,
}

/// Re-tunes `b` at a given `γ` near an EP3 so that the three real roots sit
/// symmetrically about an inflection point of `f` (`f = f'' = 0`).
///
/// This follows the centre line of the wedge of parameter space where all
/// three eigenvalues are real; moving `γ` alone at fixed `b` leaves that wedge.
pub fn retuned_approach(ep3: &Ep3Solution, gamma: f64) -> Result<ApproachPoint> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma must be > 0, got {gamma}"
        )));
    }
    let big_gamma = ep3.big_gamma;
    let substeps = (((gamma - ep3.gamma).abs() / 1e-3).ceil() as usize).max(1);
    let mut x = Vector2::new(ep3.b, ep3.k);
    for s in 1..=substeps {
        let g = ep3.gamma + (gamma - ep3.gamma) * s as f64 / substeps as f64;
        x = centre_newton(big_gamma, g, x)?;
    }
    Ok(ApproachPoint {
        params: SystemParams::new(gamma, x[0], big_gamma)?,
        k_centre: x[1],
    })
}

/// Newton on `(f, f'')` for `(b, k)` at fixed `(γ, Γ)`.
fn centre_newton(big_gamma: f64, gamma: f64, start: Vector2<f64>) -> Result<Vector2<f64>> {
    let eval = |x: &Vector2<f64>| -> Option<(Vector2<f64>, Matrix2<f64>)> {
        let p = SystemParams::new(gamma, x[0], big_gamma).ok()?;
        let k = x[1];
        if k <= 0.0 {
            return None;
        }
        let f = ExpPolynomial::secular(&p);
        let f1 = f.derivative();
        let f2 = f1.derivative();
        let fb = f.b_partial();
        let fb2 = fb.nth_derivative(2);
        let scale0 = f.magnitude(nalgebra::Complex::new(k, 0.0));
        let scale2 = f2.magnitude(nalgebra::Complex::new(k, 0.0));
        let values = Vector2::new(f.eval_real(k) / scale0, f2.eval_real(k) / scale2);
        let jac = Matrix2::new(
            fb.eval_real(k) / scale0,
            f1.eval_real(k) / scale0,
            fb2.eval_real(k) / scale2,
            f2.derivative().eval_real(k) / scale2,
        );
        Some((values, jac))
    };

    let mut x = start;
    for _ in 0..100 {
        let (values, jac) = eval(&x).ok_or_else(|| {
            Error::OutOfRange(format!("re-tuning left the admissible domain at {x:?}"))
        })?;
        let delta = jac
            .lu()
            .solve(&(-values))
            .ok_or_else(|| Error::OutOfRange("singular re-tuning Jacobian".into()))?;
        let mut lambda = 1.0;
        let merit0 = values.norm();
        let mut next = x + delta;
        while lambda > 1e-10 {
            next = x + delta * lambda;
            match eval(&next) {
                Some((v, _)) if v.norm() < merit0 || v.norm() <= MERIT_NOISE_FLOOR => break,
                _ => lambda *= 0.5,
            }
        }
        let step = (next - x).norm();
        x = next;
        let at_noise_floor = eval(&x).is_some_and(|(v, _)| v.amax() <= RESIDUAL_NOISE_FLOOR);
        if at_noise_floor || step <= 1e-13 * (1.0 + x.norm()) {
            return Ok(x);
        }
    }
    Err(Error::OutOfRange(format!(
        "re-tuning b at gamma = {gamma} did not converge"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::roots::find_real_roots;

    #[test]
    fn reference_ep3() {
        let sol = find_ep3(1.002, Ep3Guess::default()).unwrap();
        assert!((sol.gamma - 0.065278).abs() < 1e-4);
        assert!((sol.b - 6.20124).abs() < 1e-4);
        assert!((sol.k - 0.495849).abs() < 1e-4);
        assert!(sol.condition_residuals.iter().all(|&r| r <= EP3_TOLERANCE));
    }

    #[test]
    fn reconverges_from_own_solution() {
        let sol = find_ep3(1.002, Ep3Guess::default()).unwrap();
        let again = find_ep3(1.002, sol.as_guess()).unwrap();
        assert!(again.iterations <= 2);
        assert!((again.gamma - sol.gamma).abs() < 1e-12);
    }

    #[test]
    fn rejects_non_positive_gamma() {
        assert!(matches!(
            find_ep3(-1.0, Ep3Guess::default()),
            Err(Error::OutOfRange(_))
        ));
    }

    #[test]
    fn continuation_stops_at_the_fold() {
        assert!(find_ep3_continued(1.11).is_ok());
        assert!(matches!(find_ep3_continued(1.2), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn single_step_trace_is_find_ep3() {
        let trace = trace_ep3_family((1.002, 1.002), 1).unwrap();
        let direct = find_ep3(1.002, Ep3Guess::default()).unwrap();
        assert_eq!(trace.solutions.len(), 1);
        assert_eq!(trace.solutions[0], direct);
    }

    #[test]
    fn retuned_point_has_three_real_roots() {
        let ep3 = find_ep3(1.002, Ep3Guess::default()).unwrap();
        let pt = retuned_approach(&ep3, ep3.gamma - 1e-3).unwrap();
        let ks = find_real_roots(&pt.params, 1.002);
        assert_eq!(ks.len(), 3);
        assert!((ks[1] - pt.k_centre).abs() < 1e-9);
    }
}
