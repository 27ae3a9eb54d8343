use serde::Serialize;

use super::rng::{draw, RngSpec};
use super::samplers::Sampler;
use super::tail::{tail_from_samples, TailMode};
use crate::deviations::{rate_function, ScaleSequence};
use crate::Result;

/// One cell of an MDP diagnostic table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MdpCell {
    pub n: f64,
    pub a_n: f64,
    pub z: f64,
    pub samples: u64,
    pub hits: u64,
    pub p_hat: f64,
    /// `a_n^{-2} log P(F_n / a_n ≥ z)`; absent when no sample hit.
    pub scaled: Option<f64>,
    /// `−z² / (2 q!)`.
    pub target: f64,
    pub censored: bool,
    pub rng_seed: u64,
    pub rng_stream: u64,
}

/// Scaled log tail probabilities over a grid of `(a_n, z)`.
///
/// `family(n)` builds the sampler for index `n`; row `i` of the scale
/// sequence uses stream `spec.stream + i`.
pub fn mdp_curve<S, F>(
    family: F,
    a: &ScaleSequence,
    zs: &[f64],
    q: usize,
    n_samples: usize,
    spec: &RngSpec,
    workers: usize,
) -> Result<Vec<MdpCell>>
where
    S: Sampler,
    F: Fn(f64) -> Result<S>,
{
    let mut out = Vec::with_capacity(a.len() * zs.len());
    for (i, &(n, a_n)) in a.points.iter().enumerate() {
        let row_spec = spec.with_stream(spec.stream + i as u64);
        let sampler = family(n)?;
        let x = draw(&sampler, n_samples, &row_spec, workers)?;
        for &z in zs {
            let t = tail_from_samples(&x, a_n * z, TailMode::Upper, &row_spec);
            let scaled = (t.hits > 0).then(|| t.p_hat.ln() / (a_n * a_n));
            out.push(MdpCell {
                n,
                a_n,
                z,
                samples: t.samples,
                hits: t.hits,
                p_hat: t.p_hat,
                scaled,
                target: -rate_function(z, q)?,
                censored: t.censored,
                rng_seed: row_spec.seed,
                rng_stream: row_spec.stream,
            });
        }
    }
    Ok(out)
}
