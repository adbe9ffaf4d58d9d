//! Deterministic parallel Monte Carlo.
//!
//! Work is cut into fixed-size chunks; chunk `i` draws from its own RNG
//! stream and results are merged in chunk order, so the output does not
//! depend on the number of threads.

use rayon::prelude::*;
use smoothsq_core::rng::{stream, StreamRng};

pub const CHUNK: u64 = 1 << 16;

/// Runs `f(rng, count)` for each chunk of `total` draws and returns the
/// results in chunk order. `tag` separates the streams of different
/// experiments sharing a seed.
pub fn chunked<T, F>(seed: u64, tag: u64, total: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut StreamRng, u64) -> T + Sync,
{
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let count = CHUNK.min(total - i * CHUNK);
            let mut rng = stream(seed, (tag << 32) | i);
            f(&mut rng, count)
        })
        .collect()
}

/// Runs `body` on a pool of `threads` workers (0: pool default).
pub fn with_threads<T: Send>(threads: usize, body: impl FnOnce() -> T + Send) -> T {
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(body),
        Err(e) => {
            log::warn!("could not build a thread pool ({e}), running on the global pool");
            body()
        }
    }
}
