//! Seeded random streams.
//!
//! Every run derives independent ChaCha8 streams from a single 64-bit seed, one
//! per round (or per sender stream) plus a few reserved streams for run-level
//! decisions. The mapping is fixed, so rounds can be executed in any order and
//! still reproduce the same report.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream used by the dealer to select second-check rounds.
pub(crate) const STREAM_CHECK2: u64 = u64::MAX;
/// Stream used for the naive-QSS consistency sample.
pub(crate) const STREAM_VERIFY: u64 = u64::MAX - 1;
/// Stream used to draw the one-time pad when splitting a secret.
pub(crate) const STREAM_PAD: u64 = u64::MAX - 2;
/// Stream used by the block variant for check and redundancy positions.
pub(crate) const STREAM_BLOCK_LAYOUT: u64 = u64::MAX - 3;

/// Returns the random stream `stream` of the run seeded with `seed`.
pub fn substream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
