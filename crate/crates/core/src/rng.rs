//! Reproducible random streams.
//!
//! Every random quantity in the crate is drawn from ChaCha8 (`rand_chacha`)
//! keyed by a 64-bit seed expanded with `seed_from_u64`. Independent
//! substreams (one per Monte Carlo trial, per sampled graph, ...) use the
//! ChaCha stream id, so stream `k` of seed `s` is the same sequence no matter
//! which thread draws it or in what order. Changing the generator changes every
//! published number, so treat it as part of the output format.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type WalkRng = ChaCha8Rng;

/// Name recorded alongside outputs.
pub const GENERATOR: &str = "chacha8/seed_from_u64/stream=trial";

/// Substream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> WalkRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
