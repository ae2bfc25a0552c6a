use num_complex::Complex64;

use super::roots::{spectrum_with_seeds, SpectrumResult};
use crate::error::{Error, Result};
use crate::params::SystemParams;

/// One γ-point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub spectrum: SpectrumResult,
    /// Branch label of each root in `spectrum.roots`, stable along the sweep.
    pub labels: Vec<usize>,
    /// Two roots came within [`DISTINCT_ROOTS`](super::roots::DISTINCT_ROOTS) of each other, so branch
    /// identity at this point is not meaningful.
    pub ambiguous: bool,
}

/// Spectra along an ascending γ grid at fixed `(b, Γ)` of `p0`.
///
/// Complex roots are continued from the previous point; branch labels follow
/// nearest-neighbour matching in the complex plane.
pub fn sweep_gamma(p0: &SystemParams, gamma_grid: &[f64]) -> Result<Vec<SweepPoint>> {
    if gamma_grid.is_empty() {
        return Err(Error::InvalidGrid("gamma grid is empty".into()));
    }
    if gamma_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid(
            "gamma grid must be strictly ascending".into(),
        ));
    }

    let mut points: Vec<SweepPoint> = Vec::with_capacity(gamma_grid.len());
    let mut next_label = 0usize;
    for &gamma in gamma_grid {
        let p = p0.with_gamma(gamma)?;
        let seeds: Vec<Complex64> = points
            .last()
            .map(|prev| prev.spectrum.roots.iter().map(|k| k.value()).collect())
            .unwrap_or_default();
        let spectrum = spectrum_with_seeds(&p, &seeds);
        let current: Vec<Complex64> = spectrum.roots.iter().map(|k| k.value()).collect();

        let labels = match points.last() {
            None => {
                let labels: Vec<usize> = (0..current.len()).collect();
                next_label = current.len();
                labels
            }
            Some(prev) => {
                let previous: Vec<Complex64> =
                    prev.spectrum.roots.iter().map(|k| k.value()).collect();
                match_labels(&previous, &prev.labels, &current, &mut next_label)
            }
        };
        let ambiguous = spectrum.near_degenerate;
        points.push(SweepPoint {
            spectrum,
            labels,
            ambiguous,
        });
    }
    Ok(points)
}

/// Greedy nearest-neighbour assignment: the globally closest (previous,
/// current) pair is matched first. Unmatched current roots get fresh labels.
fn match_labels(
    previous: &[Complex64],
    previous_labels: &[usize],
    current: &[Complex64],
    next_label: &mut usize,
) -> Vec<usize> {
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for (i, c) in current.iter().enumerate() {
        for (j, p) in previous.iter().enumerate() {
            pairs.push(((c - p).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));

    let mut labels: Vec<Option<usize>> = vec![None; current.len()];
    let mut used = vec![false; previous.len()];
    for (_, i, j) in pairs {
        if labels[i].is_none() && !used[j] {
            labels[i] = Some(previous_labels[j]);
            used[j] = true;
        }
    }
    labels
        .into_iter()
        .map(|l| {
            l.unwrap_or_else(|| {
                let fresh = *next_label;
                *next_label += 1;
                fresh
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::roots::spectrum;

    #[test]
    fn rejects_bad_grids() {
        let p = SystemParams::new(0.0, 6.1, 1.002).unwrap();
        assert!(sweep_gamma(&p, &[]).is_err());
        assert!(sweep_gamma(&p, &[0.02, 0.01]).is_err());
    }

    #[test]
    fn single_point_sweep_is_the_spectrum() {
        let p = SystemParams::new(0.1, 6.1, 1.002).unwrap();
        let sweep = sweep_gamma(&p, &[0.1]).unwrap();
        assert_eq!(sweep.len(), 1);
        assert_eq!(sweep[0].spectrum, spectrum(&p));
        assert_eq!(sweep[0].labels, vec![0, 1, 2]);
    }

    #[test]
    fn labels_follow_nearest_neighbour() {
        let prev = [Complex64::new(0.5, 0.0), Complex64::new(0.4, 0.0)];
        let cur = [
            Complex64::new(0.41, 0.0),
            Complex64::new(0.52, 0.0),
            Complex64::new(0.3, 0.0),
        ];
        let mut next = 2;
        let labels = match_labels(&prev, &[0, 1], &cur, &mut next);
        assert_eq!(labels, vec![1, 0, 2]);
        assert_eq!(next, 3);
    }

    #[test]
    fn hermitian_to_broken_branches() {
        let p = SystemParams::new(0.0, 6.1, 1.002).unwrap();
        let grid: Vec<f64> = (0..=6).map(|i| i as f64 * 0.01).collect();
        let sweep = sweep_gamma(&p, &grid).unwrap();
        for pt in &sweep {
            assert_eq!(pt.spectrum.count_real(), 3);
            assert_eq!(pt.labels, vec![0, 1, 2]);
            assert!(!pt.ambiguous);
        }
        let middle: Vec<f64> = sweep.iter().map(|pt| pt.spectrum.roots[1].re()).collect();
        let spread = middle.iter().cloned().fold(f64::MIN, f64::max)
            - middle.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1e-3, "middle branch spread {spread}");
    }
}
