//! Time evolution of mode superpositions.
//!
//! A state is expanded in the bound modes with the c-product, and each
//! component rotates with its own phase:
//!
//! ```text
//! Ψ(t, x) = Σᵢ cᵢ Ψᵢ(x) exp(i kᵢ² t) / ⟨Ψ̃ᵢ|Ψᵢ⟩,    cᵢ = ⟨Ψ̃ᵢ|Ψ(0)⟩ = ∫ Ψᵢ Ψ(0) dx
//! ```
//!
//! The division by the c-norm happens here, at evaluation time, and is
//! refused when a c-norm falls below [`NORM_GUARD`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::mode::Mode;
use crate::model::wavefunction::PiecewiseWavefunction;
use crate::params::SystemParams;
use crate::quadrature::integrate;

/// Smallest admissible `|⟨Ψ̃ᵢ|Ψᵢ⟩|`.
pub const NORM_GUARD: f64 = 1e-12;

/// Default Gaussian width in model units.
pub const DEFAULT_WIDTH: f64 = 1.0;

/// Number of points in the default grids.
pub const DEFAULT_GRID_POINTS: usize = 601;

const PROJECTION_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Well {
    Left,
    Middle,
    Right,
}

impl Well {
    pub fn centre(self, p: &SystemParams) -> f64 {
        match self {
            Well::Left => -p.b(),
            Well::Middle => 0.0,
            Well::Right => p.b(),
        }
    }
}

impl fmt::Display for Well {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Well::Left => "left",
            Well::Middle => "middle",
            Well::Right => "right",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialCondition {
    /// `exp(-(x - x₀)² / (2w²))` centred on one of the wells.
    GaussianInWell { well: Well, width: f64 },
    /// Expansion coefficients `cᵢ` given directly.
    CoefficientVector(Vec<Complex64>),
}

impl InitialCondition {
    pub fn gaussian(well: Well, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "Gaussian width must be > 0, got {width}"
            )));
        }
        Ok(Self::GaussianInWell { well, width })
    }

    pub fn coefficients(c: Vec<Complex64>) -> Result<Self> {
        if c.is_empty() || c.iter().all(|z| *z == Complex64::new(0.0, 0.0)) {
            return Err(Error::InvalidParameter(
                "coefficient vector must not be all zero".into(),
            ));
        }
        if c.iter().any(|z| !z.is_finite()) {
            return Err(Error::InvalidParameter(
                "coefficients must be finite".into(),
            ));
        }
        Ok(Self::CoefficientVector(c))
    }

    pub fn description(&self) -> String {
        match self {
            Self::GaussianInWell { well, width } => {
                format!("Gaussian of width {width} centred in the {well} well")
            }
            Self::CoefficientVector(c) => {
                let parts: Vec<String> = c.iter().map(|z| z.to_string()).collect();
                format!("coefficient vector ({})", parts.join(", "))
            }
        }
    }
}

fn check_norms(modes: &[Mode]) -> Result<()> {
    for (index, m) in modes.iter().enumerate() {
        let value = m.c_norm.norm();
        if value.is_nan() || value < NORM_GUARD {
            return Err(Error::NormTooSmall { index, value });
        }
    }
    Ok(())
}

/// Expansion coefficients `cᵢ = ∫ Ψᵢ(x) g(x) dx` of a profile `g` supported on
/// `support`.
pub fn project_profile<F: Fn(f64) -> Complex64>(
    profile: F,
    support: (f64, f64),
    modes: &[Mode],
    p: &SystemParams,
) -> Result<Vec<Complex64>> {
    check_norms(modes)?;
    let (lo, hi) = support;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidGrid(format!("empty support ({lo}, {hi})")));
    }
    let mut breaks = vec![lo];
    breaks.extend(
        [-p.b(), 0.0, p.b()]
            .into_iter()
            .filter(|&x| x > lo && x < hi),
    );
    breaks.push(hi);
    Ok(modes
        .iter()
        .map(|m| {
            let w = PiecewiseWavefunction::new(*m, *p);
            integrate(|x| w.eval(x) * profile(x), &breaks, PROJECTION_TOLERANCE)
        })
        .collect())
}

/// Expansion coefficients of an initial condition.
pub fn project_initial(
    ic: &InitialCondition,
    modes: &[Mode],
    p: &SystemParams,
) -> Result<Vec<Complex64>> {
    check_norms(modes)?;
    match ic {
        InitialCondition::CoefficientVector(c) => {
            if c.len() != modes.len() {
                return Err(Error::InvalidParameter(format!(
                    "{} coefficients for {} modes",
                    c.len(),
                    modes.len()
                )));
            }
            Ok(c.clone())
        }
        InitialCondition::GaussianInWell { well, width } => {
            let x0 = well.centre(p);
            let w = *width;
            project_profile(
                |x| {
                    let d = (x - x0) / w;
                    Complex64::new((-0.5 * d * d).exp(), 0.0)
                },
                (x0 - 12.0 * w, x0 + 12.0 * w),
                modes,
                p,
            )
        }
    }
}

/// `|Ψ(t, x)|²` sampled on a rectangular grid, row-major in `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntensityField {
    pub t_grid: Vec<f64>,
    pub x_grid: Vec<f64>,
    pub values: Vec<f64>,
    pub params: SystemParams,
}

impl IntensityField {
    pub fn get(&self, it: usize, ix: usize) -> f64 {
        self.values[it * self.x_grid.len() + ix]
    }

    pub fn row(&self, it: usize) -> &[f64] {
        let nx = self.x_grid.len();
        &self.values[it * nx..(it + 1) * nx]
    }

    /// Largest intensity with its `(t index, x index)`.
    pub fn peak(&self) -> (f64, usize, usize) {
        let nx = self.x_grid.len();
        let (idx, &v) = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .expect("field is nonempty");
        (v, idx / nx, idx % nx)
    }
}

fn check_grid(name: &str, grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidGrid(format!("{name} grid is empty")));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidGrid(format!(
            "{name} grid has non-finite entries"
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(format!(
            "{name} grid must be strictly ascending"
        )));
    }
    Ok(())
}

/// Modal amplitudes `cᵢ / ⟨Ψ̃ᵢ|Ψᵢ⟩`.
fn amplitudes(modes: &[Mode], coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if modes.is_empty() || modes.len() != coeffs.len() {
        return Err(Error::InvalidParameter(format!(
            "{} coefficients for {} modes",
            coeffs.len(),
            modes.len()
        )));
    }
    check_norms(modes)?;
    Ok(modes
        .iter()
        .zip(coeffs)
        .map(|(m, c)| c / m.c_norm)
        .collect())
}

/// `Ψ(t, x)` at a single point.
pub fn superposition(
    modes: &[Mode],
    coeffs: &[Complex64],
    p: &SystemParams,
    t: f64,
    x: f64,
) -> Result<Complex64> {
    let amps = amplitudes(modes, coeffs)?;
    Ok(modes
        .iter()
        .zip(&amps)
        .map(|(m, a)| {
            let k = m.k.value();
            let phase = (Complex64::i() * k * k * t).exp();
            a * PiecewiseWavefunction::new(*m, *p).eval(x) * phase
        })
        .sum())
}

/// Intensity `|Ψ(t, x)|²` of the superposition on the grid `t_grid × x_grid`.
pub fn evolve(
    modes: &[Mode],
    coeffs: &[Complex64],
    p: &SystemParams,
    t_grid: &[f64],
    x_grid: &[f64],
) -> Result<IntensityField> {
    check_grid("t", t_grid)?;
    check_grid("x", x_grid)?;
    let amps = amplitudes(modes, coeffs)?;

    // Weighted mode profiles a_i Ψ_i(x), one row per mode.
    let profiles: Vec<Vec<Complex64>> = modes
        .iter()
        .zip(&amps)
        .map(|(m, a)| {
            let w = PiecewiseWavefunction::new(*m, *p);
            x_grid.iter().map(|&x| a * w.eval(x)).collect()
        })
        .collect();
    let energies: Vec<Complex64> = modes.iter().map(|m| m.k.value() * m.k.value()).collect();

    let nx = x_grid.len();
    let mut values = Vec::with_capacity(t_grid.len() * nx);
    let mut row = vec![Complex64::new(0.0, 0.0); nx];
    for &t in t_grid {
        row.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (profile, e) in profiles.iter().zip(&energies) {
            let phase = (Complex64::i() * e * t).exp();
            for (acc, v) in row.iter_mut().zip(profile) {
                *acc += v * phase;
            }
        }
        values.extend(row.iter().map(|v| v.norm_sqr()));
    }
    Ok(IntensityField {
        t_grid: t_grid.to_vec(),
        x_grid: x_grid.to_vec(),
        values,
        params: *p,
    })
}

/// Slowest pairwise beat `2π / min |kᵢ² - kⱼ²|`.
///
/// A diagnostic for the repeat time of intensity maxima; with incommensurate
/// eigenvalues the evolution is not strictly periodic.
pub fn beat_period(modes: &[Mode]) -> Result<f64> {
    if modes.len() < 2 {
        return Err(Error::InvalidParameter(
            "beat period needs at least two modes".into(),
        ));
    }
    let mut energies = Vec::with_capacity(modes.len());
    for m in modes {
        if !m.k.is_real(1e-12) {
            return Err(Error::NonRealEigenvalue(m.k.value()));
        }
        energies.push(m.k.re() * m.k.re());
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..energies.len() {
        for j in i + 1..energies.len() {
            min_gap = min_gap.min((energies[i] - energies[j]).abs());
        }
    }
    if min_gap == 0.0 {
        return Err(Error::InvalidParameter("coincident eigenvalues".into()));
    }
    Ok(2.0 * PI / min_gap)
}

/// `n` equally spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// `x ∈ [-b - 10, b + 10]`.
pub fn default_x_grid(p: &SystemParams) -> Vec<f64> {
    linspace(-p.b() - 10.0, p.b() + 10.0, DEFAULT_GRID_POINTS)
}

/// `t ∈ [0, 3 · period]`.
pub fn default_t_grid(period: f64) -> Vec<f64> {
    linspace(0.0, 3.0 * period, DEFAULT_GRID_POINTS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::mode::mode_for_root;
    use crate::params::ComplexK;
    use crate::spectra::find_real_roots;

    fn modes(p: &SystemParams) -> Vec<Mode> {
        find_real_roots(p, 1.002)
            .into_iter()
            .map(|k| mode_for_root(ComplexK::real(k).unwrap(), p).unwrap())
            .collect()
    }

    #[test]
    fn coefficient_vector_passes_through() {
        let p = SystemParams::new(0.02, 6.1, 1.002).unwrap();
        let ms = modes(&p);
        let c = vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
        ];
        let ic = InitialCondition::coefficients(c.clone()).unwrap();
        assert_eq!(project_initial(&ic, &ms, &p).unwrap(), c);
    }

    #[test]
    fn rejects_degenerate_initial_conditions() {
        assert!(InitialCondition::gaussian(Well::Left, 0.0).is_err());
        assert!(InitialCondition::coefficients(vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }

    #[test]
    fn single_real_mode_is_stationary() {
        let p = SystemParams::new(0.02, 6.1, 1.002).unwrap();
        let ms = modes(&p);
        let t = linspace(0.0, 500.0, 41);
        let x = linspace(-10.0, 10.0, 21);
        let field = evolve(&ms[..1], &[Complex64::new(1.0, 0.0)], &p, &t, &x).unwrap();
        for ix in 0..x.len() {
            let base = field.get(0, ix);
            for it in 0..t.len() {
                assert!((field.get(it, ix) - base).abs() <= 1e-10 * base.max(1e-300));
            }
        }
    }

    #[test]
    fn equal_spacing_beat() {
        let p = SystemParams::new(0.02, 6.1, 1.002).unwrap();
        let mut ms = modes(&p);
        let base = 0.25;
        let delta = 0.01;
        for (i, m) in ms.iter_mut().enumerate() {
            m.k = ComplexK::real((base + i as f64 * delta).sqrt()).unwrap();
        }
        let period = beat_period(&ms).unwrap();
        assert!((period - 2.0 * PI / delta).abs() < 1e-6 * period);
    }

    #[test]
    fn beat_period_rejects_complex_modes() {
        let p = SystemParams::new(0.02, 6.1, 1.002).unwrap();
        let mut ms = modes(&p);
        ms[0].k = ComplexK::new(0.5, 0.01).unwrap();
        assert!(matches!(beat_period(&ms), Err(Error::NonRealEigenvalue(_))));
    }

    #[test]
    fn tiny_norm_is_refused() {
        let p = SystemParams::new(0.02, 6.1, 1.002).unwrap();
        let mut ms = modes(&p);
        ms[1].c_norm = Complex64::new(1e-13, 0.0);
        let c = vec![Complex64::new(1.0, 0.0); 3];
        assert!(matches!(
            evolve(&ms, &c, &p, &[0.0], &[0.0]),
            Err(Error::NormTooSmall { index: 1, .. })
        ));
    }

    #[test]
    fn grids_validated() {
        let p = SystemParams::new(0.02, 6.1, 1.002).unwrap();
        let ms = modes(&p);
        let c = vec![Complex64::new(1.0, 0.0); 3];
        assert!(evolve(&ms, &c, &p, &[], &[0.0]).is_err());
        assert!(evolve(&ms, &c, &p, &[0.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn linspace_endpoints() {
        let g = linspace(-1.0, 1.0, 5);
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert_eq!(linspace(3.0, 4.0, 1), vec![3.0]);
    }
}
