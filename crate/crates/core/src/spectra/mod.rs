//! Eigenvalue searches, parameter sweeps and exceptional points.

pub mod ep3;
pub mod roots;
pub mod sweep;

pub use ep3::{
    continue_ep3, find_ep3, find_ep3_continued, retuned_approach, trace_ep3_family, ApproachPoint,
    Ep3Guess, Ep3Solution, Ep3Trace, Ep3TraceFailure, EP3_TOLERANCE, REFERENCE_BIG_GAMMA,
};
pub use roots::{
    default_seeds, find_complex_roots, find_real_roots, find_real_roots_with_step, spectrum,
    spectrum_with_seeds, ComplexRootSearch, SpectrumResult, DISTINCT_ROOTS, K_MIN, SCAN_STEP,
};
pub use sweep::{sweep_gamma, SweepPoint};
