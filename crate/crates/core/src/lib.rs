//! Cumulant machinery for elements of a fixed Wiener chaos.
//!
//! The crate works with finite-dimensional stand-ins for chaos kernels
//! (symmetric tensors over an orthonormal basis) and provides:
//!
//! * [`kernels`]: symmetric kernels, contractions, norms and the maximal
//!   contraction norm `K`;
//! * [`diagrams`]: the pair-partition classes behind the Gaussian diagram
//!   formula, their multigraphs, matching numbers and counting bounds;
//! * [`cumulants`]: exact diagram-formula cumulants of `I_q(h)`, an
//!   eigenvalue oracle for `q = 2`, k-statistics and cumulant bounds;
//! * [`deviations`]: deviation scales, tail inequalities and scale-window
//!   diagnostics;
//! * [`applications`]: Brownian-sheet explosive integrals, fBm quadratic
//!   variation and the spherical bispectrum;
//! * [`montecarlo`]: reproducible samplers and tail/MDP estimators.
//!
//! Ring-only code is generic over [`Scalar`] (`f32`, `f64`, `BigRational`);
//! the aliases below fix the common choices.

// `!(x > 0.0)` is how argument checks reject NaN along with the rest.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod cumulants;
pub mod deviations;
pub mod diagrams;
mod error;
pub mod kernels;
pub mod montecarlo;
mod scalar;

pub use error::{Error, Result};
pub use num_rational::BigRational;
pub use scalar::{pairwise_sum, Real, Scalar};

/// Double-precision symmetric kernel.
pub type Kernel = kernels::SymmetricKernel<f64>;
/// Single-precision symmetric kernel.
pub type Kernel32 = kernels::SymmetricKernel<f32>;
/// Kernel with exact rational coefficients.
pub type ExactKernel = kernels::SymmetricKernel<BigRational>;
/// Double-precision general (non-symmetric) tensor.
pub type Tensor = kernels::GeneralTensor<f64>;
/// Exact general tensor.
pub type ExactTensor = kernels::GeneralTensor<BigRational>;
