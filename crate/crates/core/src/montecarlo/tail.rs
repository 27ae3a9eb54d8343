use serde::{Deserialize, Serialize};
use statrs::distribution::{Beta, ContinuousCDF};

use super::rng::{draw, RngSpec};
use super::samplers::Sampler;
use crate::deviations::tail_bound;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailMode {
    /// `P(F ≥ z)`.
    Upper,
    /// `P(|F| ≥ z)`.
    Absolute,
}

/// A tail probability estimate with its exact 95% binomial interval.
/// Columns are flat so the record serialises directly to CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailEstimate {
    pub z: f64,
    pub mode: TailMode,
    pub samples: u64,
    pub hits: u64,
    pub p_hat: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    /// No hits: the interval is the one-sided rule-of-three `[0, 3/n]`.
    pub censored: bool,
    pub rng_seed: u64,
    pub rng_stream: u64,
    pub rng_algorithm: String,
}

/// Two-sided 95% Clopper–Pearson interval; zero hits give `[0, 3/n]`.
pub fn clopper_pearson(hits: u64, n: u64) -> (f64, f64) {
    let nf = n as f64;
    if hits == 0 {
        return (0.0, (3.0 / nf).min(1.0));
    }
    let k = hits as f64;
    let lo = Beta::new(k, nf - k + 1.0).unwrap().inverse_cdf(0.025);
    let hi = if hits == n { 1.0 } else { Beta::new(k + 1.0, nf - k).unwrap().inverse_cdf(0.975) };
    (lo, hi)
}

pub fn tail_from_samples(samples: &[f64], z: f64, mode: TailMode, spec: &RngSpec) -> TailEstimate {
    let hits = samples
        .iter()
        .filter(|&&x| match mode {
            TailMode::Upper => x >= z,
            TailMode::Absolute => x.abs() >= z,
        })
        .count() as u64;
    let n = samples.len() as u64;
    let (ci_low, ci_high) = clopper_pearson(hits, n);
    TailEstimate {
        z,
        mode,
        samples: n,
        hits,
        p_hat: hits as f64 / n as f64,
        ci_low,
        ci_high,
        censored: hits == 0,
        rng_seed: spec.seed,
        rng_stream: spec.stream,
        rng_algorithm: spec.algorithm.clone(),
    }
}

pub fn estimate_tail<S: Sampler + ?Sized>(
    sampler: &S,
    z: f64,
    mode: TailMode,
    n_samples: usize,
    spec: &RngSpec,
    workers: usize,
) -> Result<TailEstimate> {
    if n_samples < 100 {
        return Err(Error::InsufficientSamples { needed: 100, got: n_samples });
    }
    Ok(tail_from_samples(&draw(sampler, n_samples, spec, workers)?, z, mode, spec))
}

/// `P(|F| ≥ z)` against the deviation inequality at one threshold.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailBoundCheck {
    pub estimate: TailEstimate,
    pub bound: f64,
    /// The whole confidence interval lies above the bound.
    pub violated: bool,
}

pub fn check_tail_bound(samples: &[f64], zs: &[f64], q: usize, delta: f64, spec: &RngSpec) -> Result<Vec<TailBoundCheck>> {
    zs.iter()
        .map(|&z| {
            let estimate = tail_from_samples(samples, z, TailMode::Absolute, spec);
            let bound = tail_bound(z, q, delta)?;
            Ok(TailBoundCheck { violated: estimate.ci_low > bound, estimate, bound })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::montecarlo::{GaussianSampler, HermiteSumSampler};

    #[test]
    fn clopper_pearson_reference_values() {
        // R: binom.test(5, 20)$conf.int = 0.08657147 0.49104587
        let (lo, hi) = clopper_pearson(5, 20);
        assert!((lo - 0.08657147).abs() < 1e-7 && (hi - 0.49104587).abs() < 1e-7, "{lo} {hi}");
        assert_eq!(clopper_pearson(0, 300), (0.0, 0.01));
        let (lo, hi) = clopper_pearson(10, 10);
        assert_eq!(hi, 1.0);
        assert!((lo - 0.025f64.powf(0.1)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_threshold_hits_everything() {
        let s = GaussianSampler::new(1.0).unwrap();
        let e = estimate_tail(&s, 0.0, TailMode::Absolute, 1000, &RngSpec::new(1, 0), 0).unwrap();
        assert_eq!(e.p_hat, 1.0);
        assert!(e.ci_low <= e.p_hat && e.p_hat <= e.ci_high);
        assert!(estimate_tail(&s, 0.0, TailMode::Upper, 99, &RngSpec::new(1, 0), 0).is_err());
    }

    #[test]
    fn normal_quantile_inside_interval() {
        let s = GaussianSampler::new(1.0).unwrap();
        let e = estimate_tail(&s, 1.959963985, TailMode::Upper, 1_000_000, &RngSpec::new(2024, 0), 0).unwrap();
        assert!(e.ci_low <= 0.025 && 0.025 <= e.ci_high, "{e:?}");
    }

    #[test]
    fn hermite_sum_respects_bound() {
        let s = HermiteSumSampler::new(2, 10_000).unwrap();
        let spec = RngSpec::new(77, 0);
        let x = draw(&s, 200_000, &spec, 0).unwrap();
        let checks = check_tail_bound(&x, &[1.0, 2.0, 3.0, 4.0], 2, 1.25, &spec).unwrap();
        assert!(checks.iter().all(|c| !c.violated && c.estimate.p_hat <= c.bound));
    }

    #[test]
    fn zero_hits_are_censored() {
        let e = tail_from_samples(&[0.0; 200], 5.0, TailMode::Upper, &RngSpec::new(0, 0));
        assert!(e.censored);
        assert_eq!(e.ci_high, 0.015);
    }
}
