//! The three worked models: explosive integrals of a Brownian sheet, the
//! second Hermite variation of fractional Brownian motion, and the sample
//! bispectrum of a spherical Gaussian field (parameters only).

mod bispectrum;
mod fbm;
mod quadrature;
mod sheet;

pub use bispectrum::{bispectrum_deviation, bispectrum_l_bound, bispectrum_variance_factor, BispectrumModel};
pub use fbm::{
    fbm_deviation, fbm_increment_cov, fbm_rate, fbm_sigma, fbm_sigma_sq, hurst_error, hurst_estimate, FbmModel, FBM_DENSE_CAP,
};
pub use quadrature::Panels;
pub use sheet::{
    sheet_deviation, sheet_k_bound, sheet_k_discretized, sheet_k_quadrature, sheet_kernel_value, sheet_moments,
    sheet_variance_quadrature, BrownianSheetModel,
};
