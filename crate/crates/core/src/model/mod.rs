//! Domain model: boundary-condition matrix, secular function, modes and
//! wavefunctions.

pub mod matrix;
pub mod mode;
pub mod secular;
pub mod wavefunction;

pub use matrix::build_matrix;
pub use mode::{
    mode_coefficients, mode_coefficients_gamma0, mode_for_root, Mode, ModeBranch, GAMMA0_THRESHOLD,
    ROOT_TOLERANCE,
};
pub use secular::{
    gamma0_factorized, second_root_condition, secular_det, secular_det_derivs, secular_det_real,
    ExpPolynomial,
};
pub use wavefunction::{c_norm, eval_wavefunction, PiecewiseWavefunction, Side};
