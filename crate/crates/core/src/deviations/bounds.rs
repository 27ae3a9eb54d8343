use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use super::factorial;
use crate::{Error, Result};

/// A single bound evaluation as exchanged in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    pub inputs: BTreeMap<String, f64>,
    pub value: f64,
    /// Inputs that are constants of unknown value, supplied by the user.
    pub constants_flagged: Vec<String>,
}

impl BoundRecord {
    pub fn new(name: &str, inputs: &[(&str, f64)], value: f64, flagged: &[&str]) -> Self {
        Self {
            name: name.to_string(),
            inputs: inputs.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            value,
            constants_flagged: flagged.iter().map(|s| s.to_string()).collect(),
        }
    }
}

fn check_q(q: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::domain(format!("q must be >= 2, got {q}")));
    }
    Ok(())
}

fn check_z(z: f64) -> Result<()> {
    if !(z >= 0.0) {
        return Err(Error::domain(format!("z must be non-negative, got {z}")));
    }
    Ok(())
}

/// `I(z) = z² / (2 q!)`.
pub fn rate_function(z: f64, q: usize) -> Result<f64> {
    check_q(q)?;
    Ok(z * z / (2.0 * factorial(q)))
}

/// `2 exp(−¼ min{z² / 2^{q/2}, (zΔ)^{2/q}})`. `Δ = ∞` is accepted.
pub fn tail_bound(z: f64, q: usize, delta: f64) -> Result<f64> {
    check_q(q)?;
    check_z(z)?;
    if !(delta > 0.0) {
        return Err(Error::domain(format!("Δ must be positive, got {delta}")));
    }
    if z == 0.0 {
        return Ok(2.0);
    }
    let qf = q as f64;
    let gauss = z * z / 2f64.powf(qf / 2.0);
    let heavy = (z * delta).powf(2.0 / qf);
    Ok(2.0 * (-0.25 * gauss.min(heavy)).exp())
}

/// `c exp(−½ (z / √q!)^{2/q})`.
pub fn major_bound(z: f64, q: usize, c: f64) -> Result<f64> {
    check_q(q)?;
    check_z(z)?;
    if !(c > 0.0) {
        return Err(Error::domain(format!("constant c must be positive, got {c}")));
    }
    Ok(c * (-0.5 * (z / factorial(q).sqrt()).powf(2.0 / q as f64)).exp())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MajorComparison {
    pub z: f64,
    pub q: usize,
    pub delta: f64,
    pub c: f64,
    pub tail_bound: f64,
    pub major_bound: f64,
    /// `tail_bound < major_bound`.
    pub tail_better: bool,
    /// The exponent inside `tail_bound` exceeds Major's exponent, which is
    /// the constant-free form of the comparison.
    pub exponent_better: bool,
}

pub fn major_comparison(z: f64, q: usize, delta: f64, c: f64) -> Result<MajorComparison> {
    let t = tail_bound(z, q, delta)?;
    let m = major_bound(z, q, c)?;
    let qf = q as f64;
    let ours = 0.25 * (z * z / 2f64.powf(qf / 2.0)).min((z * delta).powf(2.0 / qf));
    let major = 0.5 * (z / factorial(q).sqrt()).powf(2.0 / qf);
    Ok(MajorComparison { z, q, delta, c, tail_bound: t, major_bound: m, tail_better: t < m, exponent_better: ours > major })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioDiagnostic {
    /// `|log(p_tail / (1 − Φ_{q!}(z)))|`.
    pub log_ratio: f64,
    /// `(1 + (z/√q!)³) / Δ^{1/(q−1)}`, without the unknown constants.
    pub shape: f64,
    pub gaussian_tail: f64,
}

pub fn ratio_diagnostic(p_tail: f64, z: f64, q: usize, delta: f64) -> Result<RatioDiagnostic> {
    check_q(q)?;
    check_z(z)?;
    if !(p_tail > 0.0 && p_tail < 1.0) {
        return Err(Error::domain(format!("tail probability must lie in (0, 1), got {p_tail}")));
    }
    if !(delta > 0.0) {
        return Err(Error::domain(format!("Δ must be positive, got {delta}")));
    }
    let var = factorial(q);
    let g = gaussian_tail(z, var)?;
    let shape = (1.0 + (z / var.sqrt()).powi(3)) / delta.powf(1.0 / (q as f64 - 1.0));
    Ok(RatioDiagnostic { log_ratio: (p_tail / g).ln().abs(), shape, gaussian_tail: g })
}

/// `1 − Φ_{σ²}(z)` through the complementary error function.
pub fn gaussian_tail(z: f64, variance: f64) -> Result<f64> {
    if !(variance > 0.0) {
        return Err(Error::domain(format!("variance must be positive, got {variance}")));
    }
    Ok(0.5 * erfc(z / (2.0 * variance).sqrt()))
}

/// `C exp(−c n^{1/q} z^{2/q})` for `z ≥ z0`.
pub fn hermite_sum_tail_lower(n: f64, z: f64, q: usize, big_c: f64, c: f64, z0: f64) -> Result<f64> {
    check_q(q)?;
    if !(big_c > 0.0 && c > 0.0) {
        return Err(Error::domain("constants C and c must be positive"));
    }
    if !(n > 0.0) {
        return Err(Error::domain(format!("n must be positive, got {n}")));
    }
    if !(z >= z0) {
        return Err(Error::domain(format!("z = {z} is below the threshold z0 = {z0}")));
    }
    let qf = q as f64;
    Ok(big_c * (-c * n.powf(1.0 / qf) * z.powf(2.0 / qf)).exp())
}

/// `Δ^{−1/(1+2γ)}`.
pub fn berry_esseen_shape(delta: f64, gamma: f64) -> Result<f64> {
    if !(delta > 0.0 && gamma >= 0.0) {
        return Err(Error::domain("need Δ > 0 and γ >= 0"));
    }
    Ok(delta.powf(-1.0 / (1.0 + 2.0 * gamma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn rate_function_examples() {
        assert_eq!(rate_function(0.0, 3).unwrap(), 0.0);
        for q in 2..=6 {
            assert!(close(rate_function((2.0 * factorial(q)).sqrt(), q).unwrap(), 1.0, 1e-14));
        }
        assert_eq!(rate_function(2.0, 2).unwrap(), 1.0);
    }

    #[test]
    fn tail_bound_examples() {
        assert_eq!(tail_bound(0.0, 3, 0.5).unwrap(), 2.0);
        assert!(close(tail_bound(2.0, 2, 1.0).unwrap(), 2.0 * (-0.5f64).exp(), 1e-15));
        assert!(tail_bound(1.0, 2, 0.0).is_err());
        // Gaussian branch only when Δ is unbounded
        assert!(close(tail_bound(3.0, 2, f64::INFINITY).unwrap(), 2.0 * (-9.0f64 / 8.0).exp(), 1e-15));
    }

    #[test]
    fn major_examples() {
        assert_eq!(major_bound(0.0, 4, 2.5).unwrap(), 2.5);
        assert!(close(major_bound(2f64.sqrt(), 2, 1.0).unwrap(), (-0.5f64).exp(), 1e-15));
        assert!(major_bound(1.0, 2, 0.0).is_err());
        for q in [2, 3] {
            for z in [6.0, 8.0, 10.0, 20.0] {
                for d in [10.0, 100.0, 1000.0] {
                    let c = major_comparison(z, q, d, 1.0).unwrap();
                    assert!(c.tail_better && c.exponent_better, "q={q} z={z} Δ={d}");
                }
            }
        }
    }

    #[test]
    fn ratio_examples() {
        let g = gaussian_tail(1.3, 6.0).unwrap();
        assert!(ratio_diagnostic(g, 1.3, 3, 2.0).unwrap().log_ratio.abs() < 1e-14);
        assert!(ratio_diagnostic(0.5, 0.0, 2, 2.0).unwrap().log_ratio.abs() < 1e-15);
        for q in 2..=5 {
            let d = 3.7;
            let r = ratio_diagnostic(0.1, factorial(q).sqrt(), q, d).unwrap();
            assert!(close(r.shape, 2.0 / d.powf(1.0 / (q as f64 - 1.0)), 1e-14));
        }
        assert!(ratio_diagnostic(1.0, 1.0, 2, 1.0).is_err());
        assert!(ratio_diagnostic(0.0, 1.0, 2, 1.0).is_err());
    }

    #[test]
    fn gaussian_tail_examples() {
        assert_eq!(gaussian_tail(0.0, 3.0).unwrap(), 0.5);
        assert_eq!(gaussian_tail(1e3, 1.0).unwrap(), 0.0);
        assert!((gaussian_tail(1.959963985, 1.0).unwrap() - 0.025).abs() < 1e-9);
        // deep tail oracle: 1 - Φ(10) = 7.619853024160527e-24
        let deep = gaussian_tail(10.0, 1.0).unwrap();
        assert!((deep / 7.619853024160526e-24 - 1.0).abs() < 1e-10, "{deep:e}");
        assert!(gaussian_tail(1.0, 0.0).is_err());
    }

    #[test]
    fn hermite_lower_examples() {
        assert!(close(hermite_sum_tail_lower(1.0, 1.0, 2, 1.0, 1.0, 0.0).unwrap(), (-1.0f64).exp(), 1e-15));
        assert_eq!(hermite_sum_tail_lower(1.0, 1e300, 2, 1.0, 1.0, 0.0).unwrap(), 0.0);
        for q in 2..=5 {
            for t in [2.0, 4.0, 9.0] {
                let a = hermite_sum_tail_lower(3.0, 5.0, q, 1.0, 0.2, 0.0).unwrap();
                let b = hermite_sum_tail_lower(3.0 * t, 5.0 / t.sqrt(), q, 1.0, 0.2, 0.0).unwrap();
                assert!(close(a, b, 1e-12));
            }
        }
        assert!(hermite_sum_tail_lower(1.0, 0.5, 2, 1.0, 1.0, 1.0).is_err());
        assert!(hermite_sum_tail_lower(1.0, 2.0, 2, -1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn berry_esseen_examples() {
        assert!(close(berry_esseen_shape(4.0, 0.0).unwrap(), 0.25, 1e-15));
        assert!(close(berry_esseen_shape(4.0, 0.5).unwrap(), 0.5, 1e-15));
        assert!(berry_esseen_shape(8.0, 1.0).unwrap() < berry_esseen_shape(4.0, 1.0).unwrap());
    }

    #[test]
    fn record_serialises() {
        let r = BoundRecord::new("major_bound", &[("z", 2.0), ("c", 1.0)], 0.5, &["c"]);
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.contains("\"constants_flagged\":[\"c\"]"));
        assert_eq!(serde_json::from_str::<BoundRecord>(&json).unwrap(), r);
    }

    proptest! {
        #[test]
        fn tail_bound_monotone(q in 2usize..7, z in 0.0f64..50.0, dz in 0.0f64..5.0, d in 0.01f64..1e4, dd in 0.0f64..100.0) {
            let a = tail_bound(z, q, d).unwrap();
            prop_assert!(a > 0.0 && a <= 2.0);
            prop_assert!(tail_bound(z + dz, q, d).unwrap() <= a);
            prop_assert!(tail_bound(z, q, d + dd).unwrap() <= a);
        }

        #[test]
        fn rate_function_convex(q in 2usize..7, x in -20.0f64..20.0, y in -20.0f64..20.0, t in 0.01f64..0.99) {
            prop_assume!((x - y).abs() > 1e-3);
            let mid = rate_function(t * x + (1.0 - t) * y, q).unwrap();
            let chord = t * rate_function(x, q).unwrap() + (1.0 - t) * rate_function(y, q).unwrap();
            prop_assert!(mid < chord);
            prop_assert!(rate_function(x, q).unwrap() >= 0.0);
        }

        #[test]
        fn gaussian_tail_symmetry(z in -40.0f64..40.0, v in 0.01f64..100.0) {
            let s = gaussian_tail(z, v).unwrap() + gaussian_tail(-z, v).unwrap();
            prop_assert!((s - 1.0).abs() < 1e-15);
        }
    }
}
