use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("eigenvalue parameter must satisfy Re(k) > 0, got {0}")]
    NonPositiveK(Complex64),

    #[error("unsupported derivative order {0} (expected 1 or 2)")]
    UnsupportedOrder(u8),

    #[error("k = {k} is not a root of the secular function (scaled residual {residual:e})")]
    NotARoot { k: Complex64, residual: f64 },

    #[error(
        "coefficient formulas are singular at k = {k} for gamma = {gamma:e}; \
         use the gamma -> 0 limit branch"
    )]
    DegenerateCoefficients { k: Complex64, gamma: f64 },

    #[error("k2 = {k} does not satisfy exp(-2 k b) + 2 k - 1 = 0 (residual {residual:e})")]
    NotSecondRoot { k: Complex64, residual: f64 },

    #[error("c-norm of mode {index} is too small ({value:e}); the superposition is ill-defined")]
    NormTooSmall { index: usize, value: f64 },

    #[error("Newton iteration from seed {seed} did not converge")]
    RootNonConvergence { seed: Complex64 },

    #[error(
        "EP3 search did not converge after {iterations} iterations; last iterate \
         gamma = {gamma}, b = {b}, k = {k}, residuals = {residuals:?}"
    )]
    Ep3NonConvergence {
        iterations: usize,
        gamma: f64,
        b: f64,
        k: f64,
        residuals: [f64; 3],
    },

    #[error("out of range: {0}")]
    OutOfRange(String),

    #[error("eigenvalue {0} is not real")]
    NonRealEigenvalue(Complex64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}
