use serde::Serialize;

use crate::deviations::{Delta, DeviationParams};
use crate::diagrams::alpha;
use crate::{Error, Result};

/// Frequency triple `ℓ1 ≤ ℓ2 ≤ ℓ3` of a sample bispectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BispectrumModel {
    pub l1: u64,
    pub l2: u64,
    pub l3: u64,
}

impl BispectrumModel {
    /// Checks ordering, the triangle conditions and even total.
    pub fn new(l1: u64, l2: u64, l3: u64) -> Result<Self> {
        if !(l1 <= l2 && l2 <= l3) {
            return Err(Error::domain(format!("frequencies must be ordered, got ({l1}, {l2}, {l3})")));
        }
        if l3 > l1 + l2 {
            return Err(Error::domain(format!("triangle condition fails for ({l1}, {l2}, {l3})")));
        }
        if (l1 + l2 + l3) % 2 == 1 {
            return Err(Error::domain(format!("ℓ1 + ℓ2 + ℓ3 must be even, got ({l1}, {l2}, {l3})")));
        }
        Ok(Self { l1, l2, l3 })
    }

    /// The triple `(n, u_n, v_n)` with `n ≤ u_n ≤ v_n ≤ 2n`.
    pub fn sequence(n: u64, u: u64, v: u64) -> Result<Self> {
        if !(n <= u && u <= v && v <= 2 * n) {
            return Err(Error::domain(format!("need n <= u <= v <= 2n, got ({n}, {u}, {v})")));
        }
        Self::new(n, u, v)
    }

    /// `D = 1 + 1{ℓ1=ℓ2} + 1{ℓ2=ℓ3} + 3·1{ℓ1=ℓ3}`, the variance of the
    /// rescaled sample bispectrum.
    pub fn variance_factor(&self) -> u32 {
        1 + u32::from(self.l1 == self.l2) + u32::from(self.l2 == self.l3) + 3 * u32::from(self.l1 == self.l3)
    }
}

pub fn bispectrum_variance_factor(l1: u64, l2: u64, l3: u64) -> Result<u32> {
    Ok(BispectrumModel::new(l1, l2, l3)?.variance_factor())
}

/// `L_n ≤ 2 / √(3n)`, from `cum_4 ≤ 432 / n`.
pub fn bispectrum_l_bound(n: f64) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(Error::domain(format!("n must be >= 1, got {n}")));
    }
    Ok(2.0 / (3.0 * n).sqrt())
}

/// `q = 3` parameters with `Δ = 3^{−9/2} (√(3n)/2)^{5/12}`.
pub fn bispectrum_deviation(n: f64) -> Result<DeviationParams> {
    let l = bispectrum_l_bound(n)?;
    Ok(DeviationParams {
        q: 3,
        gamma: 0.5,
        k: None,
        l: Some(l),
        alpha: alpha(3)?,
        delta: Delta::Finite(3f64.powf(-4.5) * ((3.0 * n).sqrt() / 2.0).powf(5.0 / 12.0)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deviations::delta_from_l;

    #[test]
    fn variance_factors() {
        for l in [2, 4, 10] {
            assert_eq!(bispectrum_variance_factor(l, l, l).unwrap(), 6);
        }
        assert_eq!(bispectrum_variance_factor(2, 4, 6).unwrap(), 1);
        assert_eq!(bispectrum_variance_factor(2, 2, 4).unwrap(), 2);
        assert_eq!(bispectrum_variance_factor(4, 5, 5).unwrap(), 2);
        assert!(bispectrum_variance_factor(4, 2, 6).is_err());
        assert!(bispectrum_variance_factor(1, 2, 5).is_err());
        assert!(bispectrum_variance_factor(1, 2, 2).is_err());
        assert!(BispectrumModel::sequence(4, 5, 9).is_err());
        assert_eq!(BispectrumModel::sequence(4, 6, 8).unwrap().variance_factor(), 1);
    }

    #[test]
    fn deviation_examples() {
        assert!((bispectrum_l_bound(12.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
        let mut last = 0.0;
        for n in [1.0, 5.0, 12.0, 1e3, 1e6] {
            let p = bispectrum_deviation(n).unwrap();
            assert_eq!(p.gamma, 0.5);
            let generic = delta_from_l(3, p.l.unwrap()).unwrap().value();
            assert!((p.delta.value() - generic).abs() <= 1e-12 * generic);
            assert!(p.delta.value() > last);
            last = p.delta.value();
        }
        assert!(bispectrum_deviation(0.5).is_err());
    }
}
