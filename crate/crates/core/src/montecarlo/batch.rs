use std::collections::BTreeSet;

use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use super::rng::{with_workers, RngSpec};
use crate::{Error, Result};

/// A unit of work with its own random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BatchTask {
    pub id: u64,
    pub stream: u64,
}

/// Runs every task on its own stream of `seed` and returns `(id, result)`
/// in ascending id order, whatever the worker count.
pub fn run_batch<T, F>(tasks: &[BatchTask], workers: usize, seed: u64, f: F) -> Result<Vec<(u64, T)>>
where
    T: Send,
    F: Fn(&BatchTask, &mut ChaCha20Rng) -> T + Sync,
{
    let mut streams = BTreeSet::new();
    for t in tasks {
        if !streams.insert(t.stream) {
            return Err(Error::StreamCollision(t.stream));
        }
    }
    let mut out: Vec<(u64, T)> = with_workers(workers, || {
        tasks
            .par_iter()
            .map(|t| {
                let mut rng = RngSpec::new(seed, t.stream).rng_for(0);
                (t.id, f(t, &mut rng))
            })
            .collect()
    })?;
    out.sort_by_key(|(id, _)| *id);
    Ok(out)
}
