use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct EmpiricalOptions {
    /// Bootstrap replicates for the standard errors.
    pub bootstrap: usize,
    /// Seed for the bootstrap resampling stream.
    pub seed: u64,
}

impl Default for EmpiricalOptions {
    fn default() -> Self {
        Self { bootstrap: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CumulantEstimate {
    pub order: usize,
    pub value: f64,
    pub se: f64,
    /// Orders 5 and 6 use plug-in (biased) estimators.
    pub biased: bool,
}

pub const MAX_EMPIRICAL_ORDER: usize = 6;

/// Central moments `m_1..m_6` (with `m_1` the mean) of the sample.
fn moments(x: &[f64]) -> [f64; 7] {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let mut s = [0.0; 7];
    for &v in x {
        let d = v - mean;
        let d2 = d * d;
        s[2] += d2;
        s[3] += d2 * d;
        s[4] += d2 * d2;
        s[5] += d2 * d2 * d;
        s[6] += d2 * d2 * d2;
    }
    for v in &mut s[2..] {
        *v /= n;
    }
    s[1] = mean;
    s
}

fn estimates(m: &[f64; 7], n: f64, max_m: usize) -> Vec<f64> {
    let k = [
        m[1],
        n / (n - 1.0) * m[2],
        n * n / ((n - 1.0) * (n - 2.0)) * m[3],
        n * n * ((n + 1.0) * m[4] - 3.0 * (n - 1.0) * m[2] * m[2]) / ((n - 1.0) * (n - 2.0) * (n - 3.0)),
        m[5] - 10.0 * m[3] * m[2],
        m[6] - 15.0 * m[4] * m[2] - 10.0 * m[3] * m[3] + 30.0 * m[2].powi(3),
    ];
    k[..max_m].to_vec()
}

/// Cumulant estimates of orders `1..=max_m` with bootstrap standard errors.
///
/// Orders 1 to 4 are the unbiased k-statistics; 5 and 6 are plug-in
/// estimates from central moments. Needs at least `10 · max_m` samples.
pub fn empirical_cumulants(samples: &[f64], max_m: usize, opts: &EmpiricalOptions) -> Result<Vec<CumulantEstimate>> {
    if max_m == 0 || max_m > MAX_EMPIRICAL_ORDER {
        return Err(Error::domain(format!("empirical cumulant order must be in 1..={MAX_EMPIRICAL_ORDER}")));
    }
    let needed = 10 * max_m;
    if samples.len() < needed {
        return Err(Error::InsufficientSamples { needed, got: samples.len() });
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite sample".into()));
    }
    let n = samples.len();
    let point = estimates(&moments(samples), n as f64, max_m);

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut sum = vec![0.0; max_m];
    let mut sum_sq = vec![0.0; max_m];
    let mut buf = vec![0.0; n];
    for _ in 0..opts.bootstrap {
        for slot in buf.iter_mut() {
            *slot = samples[rng.random_range(0..n)];
        }
        for (i, v) in estimates(&moments(&buf), n as f64, max_m).into_iter().enumerate() {
            sum[i] += v;
            sum_sq[i] += v * v;
        }
    }
    let b = opts.bootstrap as f64;
    Ok(point
        .into_iter()
        .enumerate()
        .map(|(i, value)| {
            let se = if opts.bootstrap < 2 {
                f64::NAN
            } else {
                let mean = sum[i] / b;
                ((sum_sq[i] - b * mean * mean) / (b - 1.0)).max(0.0).sqrt()
            };
            CumulantEstimate { order: i + 1, value, se, biased: i >= 4 }
        })
        .collect())
}
