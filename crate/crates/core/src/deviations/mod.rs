//! Deviation parameters and the tail, ratio and moderate-deviation bounds
//! for normalised chaos sequences.
//!
//! Constants that only exist (the `c`, `C`, `c_0..c_2` of the various
//! estimates) are explicit inputs; every [`BoundRecord`] lists which of its
//! inputs were such constants so that downstream output never presents
//! them as known values.

mod bounds;
mod mdp;
mod params;

pub use bounds::{
    berry_esseen_shape, gaussian_tail, hermite_sum_tail_lower, major_bound, major_comparison, rate_function,
    ratio_diagnostic, tail_bound, BoundRecord, MajorComparison, RatioDiagnostic,
};
pub use mdp::{mdp_scale_check, MdpClass, MdpVerdict, SLOPE_DEAD_BAND};
pub use params::{delta_from_k, delta_from_l, Delta, DeviationParams, Growth, ScaleSequence};

pub(crate) fn factorial(q: usize) -> f64 {
    (1..=q).map(|k| k as f64).product()
}
