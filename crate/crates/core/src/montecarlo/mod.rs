//! Monte Carlo sampling of chaos elements and the tail, cumulant and
//! moderate-deviation diagnostics built on it.
//!
//! Draws are grouped in fixed-size chunks and every chunk has its own
//! position in a counter-based ChaCha20 stream, so results do not depend on
//! the number of worker threads.

mod batch;
mod hermite;
mod mdp;
mod rng;
mod samplers;
mod tail;

pub use batch::{run_batch, BatchTask};
pub use hermite::{hermite, HERMITE_MAX_DEGREE};
pub use mdp::{mdp_curve, MdpCell};
pub use rng::{draw, RngSpec, CHUNK};
pub use samplers::{
    sample_chaos, sample_fbm_variation, wick_self_test, ChaosSampler, FbmVariationSampler, GaussianSampler,
    HermiteSumSampler, Sampler,
};
pub use tail::{check_tail_bound, clopper_pearson, estimate_tail, tail_from_samples, TailBoundCheck, TailEstimate, TailMode};
