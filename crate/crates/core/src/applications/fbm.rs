use nalgebra::DMatrix;
use serde::Serialize;

use crate::deviations::{Delta, DeviationParams};
use crate::diagrams::alpha;
use crate::{Error, Result};

/// Largest path length factorised densely.
pub const FBM_DENSE_CAP: usize = 4096;

fn check_h(h: f64) -> Result<()> {
    if !(h > 0.0 && h < 1.0) {
        return Err(Error::domain(format!("Hurst index must lie in (0, 1), got {h}")));
    }
    Ok(())
}

fn check_clt(h: f64) -> Result<()> {
    if !(h > 0.0 && h <= 0.75) {
        return Err(Error::domain(format!("the normal limit needs 0 < H <= 3/4, got {h}")));
    }
    Ok(())
}

/// Correlation of unit-spaced increments,
/// `ρ_H(k) = ½(|k+1|^{2H} + |k−1|^{2H} − 2|k|^{2H})`.
pub fn fbm_increment_cov(h: f64, k: i64) -> Result<f64> {
    check_h(h)?;
    let e = 2.0 * h;
    let k = k.unsigned_abs() as f64;
    Ok(0.5 * ((k + 1.0).powf(e) + (k - 1.0).abs().powf(e) - 2.0 * k.powf(e)))
}

/// `σ_n² = Σ_{j,k<n} ρ_H(j−k)²`, so that the normalised second Hermite
/// variation has variance 2. Exactly `n` at `H = 1/2`.
pub fn fbm_sigma_sq(h: f64, n: u64) -> Result<f64> {
    check_h(h)?;
    if n == 0 {
        return Err(Error::domain("n must be >= 1"));
    }
    let mut s = n as f64;
    for k in 1..n {
        s += 2.0 * (n - k) as f64 * fbm_increment_cov(h, k as i64)?.powi(2);
    }
    Ok(s)
}

pub fn fbm_sigma(h: f64, n: u64) -> Result<f64> {
    Ok(fbm_sigma_sq(h, n)?.sqrt())
}

/// Total-variation rate `A_n` in its four regimes, times `c_H`.
pub fn fbm_rate(h: f64, n: u64, c_h: f64) -> Result<f64> {
    check_clt(h)?;
    if n < 2 {
        return Err(Error::domain("n must be >= 2"));
    }
    if !(c_h > 0.0) {
        return Err(Error::domain("c_H must be positive"));
    }
    let nf = n as f64;
    let shape = if h < 0.625 {
        nf.powf(-0.5)
    } else if h == 0.625 {
        nf.ln().powf(1.5) / nf.sqrt()
    } else if h < 0.75 {
        nf.powf(4.0 * h - 3.0)
    } else {
        1.0 / nf.ln()
    };
    Ok(c_h * shape)
}

/// `q = 2` parameters with `K ≤ A_n / (2√2)` and `Δ = 2^{−9/4} A_n^{−1/2}`.
pub fn fbm_deviation(h: f64, n: u64, c_h: f64) -> Result<DeviationParams> {
    let a = fbm_rate(h, n, c_h)?;
    Ok(DeviationParams {
        q: 2,
        gamma: 0.0,
        k: Some(a / (2.0 * 2f64.sqrt())),
        l: None,
        alpha: alpha(2)?,
        delta: Delta::Finite(2f64.powf(-2.25) / a.sqrt()),
    })
}

/// `Ĥ_n = ½ − log S_n / (2 log n)`.
pub fn hurst_estimate(s_n: f64, n: u64) -> Result<f64> {
    if !(s_n > 0.0) {
        return Err(Error::domain(format!("quadratic variation must be positive, got {s_n}")));
    }
    if n < 2 {
        return Err(Error::domain("n must be >= 2"));
    }
    Ok(0.5 - s_n.ln() / (2.0 * (n as f64).ln()))
}

/// `Ĥ_n − H = −log(σ_n F_n / n + 1) / (2 log n)`.
pub fn hurst_error(sigma_n: f64, f_n: f64, n: u64) -> Result<f64> {
    let arg = sigma_n * f_n / n as f64 + 1.0;
    if !(arg > 0.0) || n < 2 {
        return Err(Error::domain("σ_n F_n / n + 1 must be positive and n >= 2"));
    }
    Ok(-arg.ln() / (2.0 * (n as f64).ln()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FbmModel {
    pub hurst: f64,
    pub n: u64,
    pub sigma: f64,
    pub c_h: f64,
    /// `A_n`; absent for `n = 1`.
    pub rate: Option<f64>,
    pub delta: Option<f64>,
}

impl FbmModel {
    pub fn new(hurst: f64, n: u64, c_h: f64) -> Result<Self> {
        check_clt(hurst)?;
        let (rate, delta) = if n >= 2 {
            (Some(fbm_rate(hurst, n, c_h)?), Some(fbm_deviation(hurst, n, c_h)?.delta.value()))
        } else {
            (None, None)
        };
        Ok(Self { hurst, n, sigma: fbm_sigma(hurst, n)?, c_h, rate, delta })
    }

    /// Toeplitz covariance of `n` unit-spaced increments.
    pub fn covariance(&self) -> Result<DMatrix<f64>> {
        let n = self.n as usize;
        let rho: Vec<f64> = (0..n).map(|k| fbm_increment_cov(self.hurst, k as i64)).collect::<Result<_>>()?;
        Ok(DMatrix::from_fn(n, n, |i, j| rho[i.abs_diff(j)]))
    }

    /// Lower Cholesky factor of [`Self::covariance`]. A `1e-12` ridge is
    /// added if the plain factorisation fails.
    pub fn cholesky_factor(&self) -> Result<DMatrix<f64>> {
        let n = self.n as usize;
        if n > FBM_DENSE_CAP {
            return Err(Error::CapExceeded { what: "fBm dense factorisation", requested: n as u128, cap: FBM_DENSE_CAP as u128 });
        }
        let c = self.covariance()?;
        if let Some(ch) = c.clone().cholesky() {
            return Ok(ch.unpack());
        }
        log::warn!("fBm covariance not numerically positive definite; retrying with a 1e-12 ridge");
        let ridge = c + DMatrix::identity(n, n) * 1e-12;
        ridge.cholesky().map(|ch| ch.unpack()).ok_or_else(|| Error::Numerical("fBm covariance factorisation failed".into()))
    }
}
