//! Deterministic parallel helpers.
//!
//! Every randomized computation in the crate splits its work into blocks of a
//! fixed size. Block `b` draws from its own ChaCha stream derived from
//! `(seed, b)`, and per-block partial results are reduced in block order, so the
//! outcome depends only on the seed and never on how many rayon workers ran.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{LabError, Result};

/// Samples handled by one Monte Carlo block.
pub const BLOCK: usize = 1 << 14;

/// Independent generator for `stream` under `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Derives a sub-seed so that unrelated consumers of one user seed do not share
/// streams.
pub fn derive_seed(seed: u64, domain: u64) -> u64 {
    // splitmix64 finalizer
    let mut z = seed ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Runs `f(block_index, block_len)` over `total` items split into [`BLOCK`]-sized
/// blocks and returns the per-block results in block order.
pub fn map_blocks<T, F>(total: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> T + Sync,
{
    let blocks = total.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let len = BLOCK.min(total - b * BLOCK);
            f(b, len)
        })
        .collect()
}

/// Runs `f` inside a dedicated pool of `workers` threads (`0` = rayon default).
pub fn with_workers<T, F>(workers: usize, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| LabError::arg(format!("cannot build worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
