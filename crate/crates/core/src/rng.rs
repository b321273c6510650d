//! Counter-based seeding for reproducible parallel Monte Carlo.
//!
//! Every replication owns a ChaCha8 stream keyed by
//! `(cell_index << 32) | replication_index` under the run's master seed, so
//! the numbers a replication sees do not depend on which thread runs it or
//! in what order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used everywhere in the crate.
pub type StreamRng = ChaCha8Rng;

/// Packs a grid cell and replication index into a ChaCha stream id.
#[inline]
pub fn stream_key(cell: u32, replication: u32) -> u64 {
    (u64::from(cell) << 32) | u64::from(replication)
}

/// Generator for one replication of one grid cell.
pub fn replication_rng(seed: u64, cell: u32, replication: u32) -> StreamRng {
    let mut rng = StreamRng::seed_from_u64(seed);
    rng.set_stream(stream_key(cell, replication));
    rng
}
