use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::samplers::Sampler;
use crate::{Error, Result};

/// Samples per independently positioned block of the stream.
pub const CHUNK: usize = 1024;

/// ChaCha20 words reserved for one chunk.
const CHUNK_WORDS: u128 = 1 << 40;

pub const ALGORITHM: &str = "chacha20";

/// Identifies a reproducible random stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RngSpec {
    pub seed: u64,
    pub stream: u64,
    pub algorithm: String,
}

impl RngSpec {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream, algorithm: ALGORITHM.to_string() }
    }

    pub fn with_stream(&self, stream: u64) -> Self {
        Self::new(self.seed, stream)
    }

    /// Generator positioned at the start of chunk `chunk`.
    pub fn rng_for(&self, chunk: u64) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng.set_word_pos(u128::from(chunk) * CHUNK_WORDS);
        rng
    }
}

/// Runs `f` on a pool of `workers` threads; `0` uses the global pool.
pub(crate) fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    if workers == 0 {
        return Ok(f());
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Numerical(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

/// `n` draws from `sampler`, identical for every worker count.
pub fn draw<S: Sampler + ?Sized>(sampler: &S, n: usize, spec: &RngSpec, workers: usize) -> Result<Vec<f64>> {
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = with_workers(workers, || {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut rng = spec.rng_for(c as u64);
                let len = CHUNK.min(n - c * CHUNK);
                (0..len).map(|_| sampler.sample(&mut rng)).collect()
            })
            .collect()
    })?;
    Ok(parts.concat())
}
