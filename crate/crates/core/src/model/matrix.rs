use nalgebra::Matrix3;
use num_complex::Complex64;

use crate::params::{ComplexK, SystemParams};

/// Boundary-condition matrix acting on `(r, ϱ₁, ϱ₂)`.
///
/// Rows encode the derivative jumps at `x = -b`, `x = +b` and `x = 0`; the
/// continuity conditions have already been used to eliminate `A` and `B`.
pub fn build_matrix(k: ComplexK, p: &SystemParams) -> Matrix3<Complex64> {
    let k = k.value();
    let kappa = p.kappa0();
    let kappa_c = kappa.conj();
    let e = (-2.0 * k * p.b()).exp();
    let zero = Complex64::new(0.0, 0.0);
    let big_gamma = Complex64::new(p.big_gamma(), 0.0);
    Matrix3::new(
        kappa * e + kappa - 2.0 * k,
        kappa * e - kappa + 2.0 * k,
        zero,
        kappa_c * e + kappa_c - 2.0 * k,
        zero,
        -kappa_c * e + kappa_c - 2.0 * k,
        -big_gamma,
        k,
        -k,
    )
}

/// Frobenius norm of a complex 3×3 matrix.
pub fn frobenius_norm(m: &Matrix3<Complex64>) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::secular::secular_det;

    #[test]
    fn determinant_matches_closed_form() {
        let p = SystemParams::new(0.4, 1.7, 0.6).unwrap();
        let k = ComplexK::new(0.55, 0.12).unwrap();
        let det = build_matrix(k, &p).determinant();
        let closed = secular_det(k, &p);
        assert!((det - closed).norm() <= 1e-13 * closed.norm().max(1.0));
    }

    #[test]
    fn hermitian_rows_share_pattern() {
        let p = SystemParams::new(0.0, 2.0, 1.0).unwrap();
        let k = ComplexK::real(0.4).unwrap();
        let m = build_matrix(k, &p);
        // κ₀ = κ₀* = 1: row 2 is row 1 with the second and third columns
        // exchanged and the off-diagonal sign flipped.
        assert_eq!(m[(0, 0)], m[(1, 0)]);
        assert_eq!(m[(0, 1)], -m[(1, 2)]);
        assert!(m.iter().all(|z| z.im == 0.0));
    }

    #[test]
    fn decoupled_third_row() {
        let p = SystemParams::new(0.3, 100.0, 1.002).unwrap();
        let k = ComplexK::real(0.501).unwrap();
        let m = build_matrix(k, &p);
        assert_eq!(m[(2, 0)].re, -1.002);
        assert_eq!(m[(2, 1)].re, 0.501);
        assert_eq!(m[(2, 2)].re, -0.501);
        assert!(m.determinant().norm() < 1e-14);
    }

    #[test]
    fn reference_ep3_point_is_nearly_singular() {
        let p = SystemParams::new(0.065278, 6.20124, 1.002).unwrap();
        let k = ComplexK::real(0.495849).unwrap();
        let m = build_matrix(k, &p);
        assert!(m.determinant().norm() <= 1e-6);
    }
}
