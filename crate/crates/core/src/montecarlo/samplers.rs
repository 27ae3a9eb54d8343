use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::hermite::{fill_table, HERMITE_MAX_DEGREE};
use super::rng::RngSpec;
use crate::applications::FbmModel;
use crate::kernels::SymmetricKernel;
use crate::{Error, Result};

/// A source of independent draws of one random variable.
pub trait Sampler: Sync {
    fn sample(&self, rng: &mut ChaCha20Rng) -> f64;
    fn name(&self) -> String;
}

fn normal(rng: &mut ChaCha20Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// `I_q(h)` for a finite-dimensional kernel, evaluated as
/// `Σ coeff · mult · Π_j H_{c_j}(Z_j)` over canonical index tuples, where
/// `mult = q!/Π c_j!` and `c_j` counts index `j` in the tuple.
#[derive(Debug, Clone)]
pub struct ChaosSampler {
    order: usize,
    dim: usize,
    /// Weight and `(basis index, power)` pairs of each term.
    terms: Vec<(f64, Vec<(usize, usize)>)>,
}

impl ChaosSampler {
    pub fn new(h: &SymmetricKernel<f64>) -> Result<Self> {
        if h.order() > HERMITE_MAX_DEGREE {
            return Err(Error::CapExceeded {
                what: "chaos order",
                requested: h.order() as u128,
                cap: HERMITE_MAX_DEGREE as u128,
            });
        }
        if h.entries().any(|(_, v)| !v.is_finite()) {
            return Err(Error::Numerical("kernel has non-finite coefficients".into()));
        }
        let terms = h
            .entries()
            .map(|(key, v)| {
                let mut powers: Vec<(usize, usize)> = Vec::new();
                for &i in key {
                    match powers.last_mut() {
                        Some((j, c)) if *j == i => *c += 1,
                        _ => powers.push((i, 1)),
                    }
                }
                (v * crate::kernels::multiplicity(key) as f64, powers)
            })
            .collect();
        Ok(Self { order: h.order(), dim: h.dim(), terms })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The chaos element at the Gaussian vector `z`.
    pub fn evaluate(&self, z: &[f64]) -> f64 {
        let width = self.order + 1;
        let mut table = vec![0.0; self.dim * width];
        for (j, &x) in z.iter().enumerate().take(self.dim) {
            fill_table(x, &mut table[j * width..(j + 1) * width]);
        }
        self.terms
            .iter()
            .map(|(w, powers)| w * powers.iter().map(|&(j, c)| table[j * width + c]).product::<f64>())
            .sum()
    }
}

impl Sampler for ChaosSampler {
    fn sample(&self, rng: &mut ChaCha20Rng) -> f64 {
        let z: Vec<f64> = (0..self.dim).map(|_| normal(rng)).collect();
        self.evaluate(&z)
    }

    fn name(&self) -> String {
        format!("chaos(q={}, N={})", self.order, self.dim)
    }
}

/// One draw of `I_q(h)` from the start of the given stream.
pub fn sample_chaos(h: &SymmetricKernel<f64>, spec: &RngSpec) -> Result<f64> {
    Ok(ChaosSampler::new(h)?.sample(&mut spec.rng_for(0)))
}

/// `n^{-1/2} Σ_{k≤n} H_q(Z_k)`, variance `q!`. For `q = 2` the sum is
/// drawn exactly as a centred chi-square with `n` degrees of freedom.
#[derive(Debug, Clone)]
pub struct HermiteSumSampler {
    q: usize,
    n: usize,
    chi: Option<ChiSquared<f64>>,
}

impl HermiteSumSampler {
    pub fn new(q: usize, n: usize) -> Result<Self> {
        if q == 0 || q > HERMITE_MAX_DEGREE || n == 0 {
            return Err(Error::domain("Hermite-sum sampler needs 1 <= q <= 30 and n >= 1"));
        }
        let chi = if q == 2 { Some(ChiSquared::new(n as f64).map_err(|e| Error::Numerical(e.to_string()))?) } else { None };
        Ok(Self { q, n, chi })
    }
}

impl Sampler for HermiteSumSampler {
    fn sample(&self, rng: &mut ChaCha20Rng) -> f64 {
        let n = self.n as f64;
        if let Some(chi) = &self.chi {
            return (chi.sample(rng) - n) / n.sqrt();
        }
        let mut table = [0.0; HERMITE_MAX_DEGREE + 1];
        let mut s = 0.0;
        for _ in 0..self.n {
            fill_table(normal(rng), &mut table[..=self.q]);
            s += table[self.q];
        }
        s / n.sqrt()
    }

    fn name(&self) -> String {
        format!("hermite-sum(q={}, n={})", self.q, self.n)
    }
}

/// Centred Gaussian with the given variance.
#[derive(Debug, Clone)]
pub struct GaussianSampler {
    sd: f64,
}

impl GaussianSampler {
    pub fn new(variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::domain("variance must be positive"));
        }
        Ok(Self { sd: variance.sqrt() })
    }
}

impl Sampler for GaussianSampler {
    fn sample(&self, rng: &mut ChaCha20Rng) -> f64 {
        self.sd * normal(rng)
    }

    fn name(&self) -> String {
        format!("gaussian(var={})", self.sd * self.sd)
    }
}

/// `σ_n^{-1} Σ_k H_2(B_{k+1} − B_k)` with increments drawn through the
/// Cholesky factor of their covariance.
#[derive(Debug, Clone)]
pub struct FbmVariationSampler {
    model: FbmModel,
    factor: DMatrix<f64>,
}

impl FbmVariationSampler {
    pub fn new(model: FbmModel) -> Result<Self> {
        let factor = model.cholesky_factor()?;
        Ok(Self { model, factor })
    }

    /// One increment path.
    pub fn increments(&self, rng: &mut ChaCha20Rng) -> DVector<f64> {
        let n = self.factor.nrows();
        let z = DVector::from_fn(n, |_, _| normal(rng));
        &self.factor * z
    }
}

impl Sampler for FbmVariationSampler {
    fn sample(&self, rng: &mut ChaCha20Rng) -> f64 {
        let x = self.increments(rng);
        x.iter().map(|v| v * v - 1.0).sum::<f64>() / self.model.sigma
    }

    fn name(&self) -> String {
        format!("fbm-variation(H={}, n={})", self.model.hurst, self.model.n)
    }
}

/// One draw of the normalised second Hermite variation.
pub fn sample_fbm_variation(model: &FbmModel, spec: &RngSpec) -> Result<f64> {
    Ok(FbmVariationSampler::new(model.clone())?.sample(&mut spec.rng_for(0)))
}

/// Checks the evaluation rule against `I_2(A) = Zᵀ A Z − tr A` on random
/// symmetric `A` and Gaussian `Z`, per sample.
pub fn wick_self_test(trials: usize, seed: u64) -> Result<()> {
    let mut rng = RngSpec::new(seed, u64::MAX).rng_for(0);
    for t in 0..trials {
        let n = 1 + t % 6;
        let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let a = (&a + a.transpose()) * 0.5;
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| a[(i, j)]).collect()).collect();
        let sampler = ChaosSampler::new(&SymmetricKernel::from_matrix(&rows)?)?;
        let z = DVector::from_fn(n, |_, _| normal(&mut rng));
        let direct = z.dot(&(&a * &z)) - a.trace();
        let wick = sampler.evaluate(z.as_slice());
        if (direct - wick).abs() > 1e-10 * direct.abs().max(1.0) {
            return Err(Error::Numerical(format!("Wick self-test failed: {wick} vs {direct}")));
        }
    }
    Ok(())
}
