//! Solver for the PT-symmetric triple delta-well model of three coupled wave
//! guides.
//!
//! The model is the one-dimensional stationary equation
//!
//! ```text
//! -Ψ''(x) - [(1+iγ) δ(x+b) + Γ δ(x) + (1-iγ) δ(x-b)] Ψ(x) = -k² Ψ(x)
//! ```
//!
//! with loss in the left well, gain in the right well and a real middle well of
//! strength `Γ`. Bound states decay as `e^{-k|x|}` outside the outer wells and
//! are determined by the roots of a closed-form secular function.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: boundary-condition matrix, secular function and its
//!   derivatives, mode coefficients, piecewise wavefunctions and the c-norm.
//! - [`spectra`]: real and complex root finding, γ-sweeps with branch tracking,
//!   and the search for third-order exceptional points (EP3).
//! - [`dynamics`]: modal time evolution of superpositions and intensity fields.
//! - [`waveguide`]: mapping between physical wave-guide parameters and the
//!   dimensionless model.
//! - [`quadrature`]: adaptive Gauss–Kronrod integration used for projections.

pub mod dynamics;
pub mod error;
pub mod model;
pub mod params;
pub mod quadrature;
pub mod spectra;
pub mod waveguide;

pub use error::{Error, Result};
pub use params::{ComplexK, SystemParams};

pub use num_complex::Complex64;
