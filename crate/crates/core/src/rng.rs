//! Counter-based random streams.
//!
//! A stream is the ChaCha8 keystream keyed by the master seed with the
//! stream id as ChaCha's 64-bit stream selector, so stream `k` of seed `s`
//! is the same sequence no matter which thread draws it or in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub fn stream(master_seed: u64, stream_id: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream_id);
    rng
}

/// Derives a fresh master seed for a sub-task (e.g. one temperature point).
pub fn derive_seed(master_seed: u64, task: u64) -> u64 {
    use rand::RngCore;
    stream(master_seed, task ^ 0x5eed_0000_0000_0000).next_u64()
}
